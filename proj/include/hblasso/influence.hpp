#ifndef HBLASSO_INFLUENCE_HPP
#define HBLASSO_INFLUENCE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hblasso/bessel.hpp"
#include "hblasso/distributions.hpp"
#include "hblasso/model.hpp"
#include "hblasso/rng.hpp"

namespace hblasso {

// log density of the hyperbolic error law at rho2 = 1:
// log f(u) = -sqrt(eta (eta + u^2)) - log(2 K_1(eta) sqrt(eta))
inline double log_hyperbolic_density(double u, double eta) {
    const double log_k1 = log_bessel_k_scaled(1.0, eta) - eta;
    return -std::sqrt(eta * (eta + u * u)) - std::log(2.0) - log_k1 - 0.5 * std::log(eta);
}

// Flat-prior simple-regression fit y_i = b0 + b1 x_i + eps_i with the
// hyperbolic likelihood at fixed eta and rho2 = 1: Gibbs over (beta, sigma2)
// with zero prior precision on beta.
inline PosteriorSamples fit_flat_prior_hlm(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                           double eta, int iterations, int burn_in,
                                           std::uint64_t seed, std::uint64_t stream = 0) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("fit_flat_prior_hlm: bad data");
    if (!(eta > 0.0)) throw std::domain_error("fit_flat_prior_hlm: eta must be > 0");
    if (burn_in < 0 || burn_in >= iterations)
        throw std::invalid_argument("fit_flat_prior_hlm: need 0 <= burn_in < iterations");
    const Eigen::Index n = x.size();
    Eigen::MatrixXd design(n, 2);
    design.col(0).setOnes();
    design.col(1) = x;

    RngStream rng(seed, stream);
    Eigen::VectorXd beta = (design.transpose() * design)
                               .ldlt()
                               .solve(design.transpose() * y); // least squares start
    Eigen::VectorXd sigma2 = Eigen::VectorXd::Ones(n);

    PosteriorSamples out;
    out.burn_in = burn_in;
    out.thin = 1;
    out.names = {"b0", "b1"};
    out.draws.resize(iterations - burn_in, 2);
    int kept = 0;
    for (int it = 0; it < iterations; ++it) {
        const Eigen::VectorXd w = sigma2.cwiseInverse();
        const Eigen::MatrixXd prec = design.transpose() * w.asDiagonal() * design;
        beta = sample_mvn_from_precision(design.transpose() * (w.asDiagonal() * y), prec, rng);
        const Eigen::VectorXd resid = y - design * beta;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = std::sqrt(eta / (resid[i] * resid[i] + eta));
            sigma2[i] = 1.0 / sample_inv_gauss(mu, eta, rng);
        }
        if (it >= burn_in) {
            out.draws(kept, 0) = beta[0];
            out.draws(kept, 1) = beta[1];
            ++kept;
        }
    }
    return out;
}

// Shared machinery for IF_k(z | x) = n Cov_post(beta_k, H(theta, z | x)) with
//   H = log f(x + z - b0 - b1 x) - mean_m log f(t_m - b0 - b1 x),
// f the hyperbolic density at the given eta and t_m the Monte Carlo draws
// from the true conditional g(. | x). The outlying response sits at distance
// z from the true regression line y = x of the experiment.
class InfluenceEvaluator {
public:
    InfluenceEvaluator(const PosteriorSamples& posterior, double eta, double x,
                       const Eigen::VectorXd& g_samples, int n_obs)
        : eta_(eta), x_(x), n_obs_(n_obs) {
        if (posterior.draws.rows() < 10'000)
            throw std::invalid_argument("influence: need at least 10000 posterior draws");
        if (g_samples.size() < 2'000)
            throw std::invalid_argument("influence: need at least 2000 draws from g");
        b0_ = posterior.column("b0");
        b1_ = posterior.column("b1");
        const Eigen::Index s = b0_.size();
        expected_logf_.resize(s);
        const double log_norm = -std::log(2.0) - (log_bessel_k_scaled(1.0, eta) - eta)
                                - 0.5 * std::log(eta);
        for (Eigen::Index i = 0; i < s; ++i) {
            const double line = b0_[i] + b1_[i] * x;
            double acc = 0.0;
            for (Eigen::Index m = 0; m < g_samples.size(); ++m) {
                const double u = g_samples[m] - line;
                acc += -std::sqrt(eta * (eta + u * u));
            }
            expected_logf_[i] = acc / static_cast<double>(g_samples.size()) + log_norm;
        }
    }

    double at(int k, double z) const {
        if (k != 0 && k != 1) throw std::invalid_argument("influence: k must be 0 or 1");
        const Eigen::VectorXd& bk = (k == 0) ? b0_ : b1_;
        const Eigen::Index s = b0_.size();
        Eigen::VectorXd h(s);
        const double log_norm = -std::log(2.0) - (log_bessel_k_scaled(1.0, eta_) - eta_)
                                - 0.5 * std::log(eta_);
        for (Eigen::Index i = 0; i < s; ++i) {
            const double u = (x_ + z) - (b0_[i] + b1_[i] * x_);
            h[i] = (-std::sqrt(eta_ * (eta_ + u * u)) + log_norm) - expected_logf_[i];
        }
        const double bbar = bk.mean();
        const double hbar = h.mean();
        double cov = 0.0;
        for (Eigen::Index i = 0; i < s; ++i) cov += (bk[i] - bbar) * (h[i] - hbar);
        cov /= static_cast<double>(s - 1);
        return n_obs_ * cov;
    }

private:
    double eta_;
    double x_;
    int n_obs_;
    Eigen::VectorXd b0_, b1_, expected_logf_;
};

inline double influence_function(int k, double z, double x, const PosteriorSamples& posterior,
                                 double eta, const Eigen::VectorXd& g_samples, int n_obs) {
    return InfluenceEvaluator(posterior, eta, x, g_samples, n_obs).at(k, z);
}

struct InfluenceRow {
    double x;
    double z;
    double eta;
    double if0;
    double if1;
};

// The full robustness experiment: data y_i = x_i + N(0,1) with x_i standard
// normal, flat-prior hyperbolic fits per eta, IF curves over the z grid for
// each covariate point.
inline std::vector<InfluenceRow> influence_grid(const std::vector<double>& etas,
                                                const std::vector<double>& xs,
                                                int z_points, double z_abs_max,
                                                int n_obs, int posterior_draws,
                                                int g_draws, std::uint64_t seed) {
    RngStream rng(seed);
    Eigen::VectorXd x(n_obs), y(n_obs);
    for (int i = 0; i < n_obs; ++i) {
        x[i] = rng.normal();
        y[i] = x[i] + rng.normal(); // true line b0 = 0, b1 = 1
    }
    std::vector<InfluenceRow> rows;
    const int burn = posterior_draws / 4;
    for (std::size_t e = 0; e < etas.size(); ++e) {
        const PosteriorSamples post =
            fit_flat_prior_hlm(x, y, etas[e], posterior_draws + burn, burn, seed + 1, e);
        for (double xv : xs) {
            Eigen::VectorXd g(g_draws);
            RngStream grng(seed + 2, static_cast<std::uint64_t>(e * 131 + xs.size()));
            for (int m = 0; m < g_draws; ++m) g[m] = xv + grng.normal();
            const InfluenceEvaluator eval(post, etas[e], xv, g, n_obs);
            for (int t = 0; t < z_points; ++t) {
                const double z = -z_abs_max + 2.0 * z_abs_max * t / (z_points - 1);
                rows.push_back({xv, z, etas[e], eval.at(0, z), eval.at(1, z)});
            }
        }
    }
    return rows;
}

} // namespace hblasso

#endif
