#ifndef HBLASSO_HBLASSO_HPP
#define HBLASSO_HBLASSO_HPP

// umbrella header

#include "hblasso/bessel.hpp"
#include "hblasso/commands.hpp"
#include "hblasso/diagnostics.hpp"
#include "hblasso/distributions.hpp"
#include "hblasso/eta_approx.hpp"
#include "hblasso/experiments.hpp"
#include "hblasso/gibbs.hpp"
#include "hblasso/influence.hpp"
#include "hblasso/io.hpp"
#include "hblasso/model.hpp"
#include "hblasso/rng.hpp"

#endif
