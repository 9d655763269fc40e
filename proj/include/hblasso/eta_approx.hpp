#ifndef HBLASSO_ETA_APPROX_HPP
#define HBLASSO_ETA_APPROX_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hblasso/bessel.hpp"
#include "hblasso/rng.hpp"

namespace hblasso {

// Gamma(A, B) approximation of the eta full conditional
//   f(eta) proportional to K_1(eta)^{-n} exp(-eta P) eta^{c-1} exp(-d eta),
// fitted by matching the first two derivatives of log f and log Ga(A, B)
// at the running point eta = A/B. P is the sufficient statistic
// (1/2) sum_i (sigma_i^2/rho2 + rho2/sigma_i^2) >= n.
struct GammaApprox {
    double A = 0.0;
    double B = 0.0;
    int iterations_used = 0;
    bool converged = false;
    double P = 0.0;
};

inline double compute_p(const Eigen::VectorXd& sigma2, double rho2) {
    if (!(rho2 > 0.0)) throw std::domain_error("compute_p: rho2 must be > 0");
    double p = 0.0;
    for (Eigen::Index i = 0; i < sigma2.size(); ++i) {
        if (!(sigma2[i] > 0.0)) throw std::domain_error("compute_p: sigma2 entries must be > 0");
        p += sigma2[i] / rho2 + rho2 / sigma2[i];
    }
    return 0.5 * p;
}

// Fixed-point iteration for (A, B); the prior pair (c, d) is the eta prior.
// Start at A = c + n, B = d + P, then
//   eta <- A/B
//   A   <- c + n eta^2 d2/deta2 log K_1(eta)
//   B   <- d + (A - c)/eta + n d/deta log K_1(eta) + P
// stopping when |eta/(A/B) - 1| < eps. A converged solution eta* = A/B
// satisfies d/deta log f(eta*) + 1/eta* = 0.
inline GammaApprox solve_ab(int n, double P, double c, double d,
                            int max_iter = 10, double eps = 1e-8,
                            double init_A = 0.0, double init_B = 0.0) {
    if (n < 0) throw std::domain_error("solve_ab: n must be >= 0");
    if (!(c > 0.0) || !(d > 0.0)) throw std::domain_error("solve_ab: c and d must be > 0");
    if (!(P >= 0.0)) throw std::domain_error("solve_ab: P must be nonnegative");

    GammaApprox out;
    out.P = P;
    out.A = (init_A > 0.0) ? init_A : c + n;
    out.B = (init_B > 0.0) ? init_B : d + P;
    for (int k = 1; k <= max_iter; ++k) {
        const double eta = std::max(out.A / out.B, 1e-8);
        double d1, d2;
        dlog_d2log_k1(eta, d1, d2);
        out.A = c + n * eta * eta * d2;
        out.B = d + (out.A - c) / eta + n * d1 + P;
        out.iterations_used = k;
        if (std::fabs(eta / (out.A / out.B) - 1.0) < eps) {
            out.converged = true;
            break;
        }
    }
    return out;
}

// log of the unnormalized true conditional,
//   -n log K_1(eta) - eta P + (c-1) log eta - d eta,
// with log K_1 recovered from the scaled evaluation
inline double true_eta_logpdf_unnorm(double eta, int n, double P, double c, double d) {
    if (!(eta > 0.0)) throw std::domain_error("true_eta_logpdf_unnorm: eta must be > 0");
    const double log_k1 = log_bessel_k_scaled(1.0, eta) - eta;
    return -n * log_k1 - eta * P + (c - 1.0) * std::log(eta) - d * eta;
}

enum class Divergence { TV, KL, RevKL };

struct DiscrepancyResult {
    double value = 0.0;
    double weight_ess_fraction = 1.0; // importance-weight ESS / mc_size
    bool low_ess_warning = false;
};

// Importance-sampling estimate of a divergence between the normalized true
// conditional f and its gamma approximation g, given one dataset of GIG-type
// draws (rho2 = 1 so P = (1/2) sum (x_i + 1/x_i)). The proposal halves both
// the shape and the rate of the gamma approximation: same location, doubled
// relative spread, heavier tails than both f and g. The normalizing constant
// of f comes from the same draws.
inline DiscrepancyResult discrepancy(const Eigen::VectorXd& data, double c, double d,
                                     Divergence measure, int mc_size, RngStream& rng) {
    if (mc_size < 1000) throw std::invalid_argument("discrepancy: mc_size too small");
    const int n = static_cast<int>(data.size());
    const double P = compute_p(data, 1.0);
    const GammaApprox ga = solve_ab(n, P, c, d);
    const double A = ga.A, B = ga.B;
    const double qA = std::max(0.5 * A, 0.5);
    const double qB = 0.5 * B;

    const double log_norm_g = A * std::log(B) - std::lgamma(A);
    const double log_norm_q = qA * std::log(qB) - std::lgamma(qA);

    std::vector<double> etas(mc_size), logf_u(mc_size), logg(mc_size), logq(mc_size), lw(mc_size);
    double lw_max = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < mc_size; ++m) {
        const double e = rng.gamma(qA, qB);
        etas[m] = e;
        const double loge = std::log(e);
        logf_u[m] = true_eta_logpdf_unnorm(e, n, P, c, d);
        logg[m] = log_norm_g + (A - 1.0) * loge - B * e;
        logq[m] = log_norm_q + (qA - 1.0) * loge - qB * e;
        lw[m] = logf_u[m] - logq[m];
        lw_max = std::max(lw_max, lw[m]);
    }
    double wsum = 0.0, w2sum = 0.0;
    for (int m = 0; m < mc_size; ++m) {
        const double w = std::exp(lw[m] - lw_max);
        wsum += w;
        w2sum += w * w;
    }
    const double log_zf = lw_max + std::log(wsum / mc_size);
    const double ess_frac = (wsum * wsum / w2sum) / mc_size;

    // KL integrands in telescoped form, t log(t/s) - t + s and its mirror:
    // pointwise nonnegative, so the estimator variance scales with the
    // divergence itself instead of the raw weight spread
    double acc = 0.0;
    for (int m = 0; m < mc_size; ++m) {
        const double logf_n = logf_u[m] - log_zf;
        const double t = std::max(std::exp(logf_n - logq[m]), 1e-300); // f/q
        const double s = std::max(std::exp(logg[m] - logq[m]), 1e-300); // g/q
        switch (measure) {
            case Divergence::TV: acc += 0.5 * std::fabs(t - s); break;
            case Divergence::KL: acc += t * (logf_n - logg[m]) - t + s; break;
            case Divergence::RevKL: acc += s * (logg[m] - logf_n) - s + t; break;
        }
    }
    DiscrepancyResult out;
    out.value = acc / mc_size;
    out.weight_ess_fraction = ess_frac;
    out.low_ess_warning = ess_frac < 0.05;
    return out;
}

} // namespace hblasso

#endif
