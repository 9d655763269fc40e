#ifndef HBLASSO_GIBBS_HPP
#define HBLASSO_GIBBS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hblasso/distributions.hpp"
#include "hblasso/eta_approx.hpp"
#include "hblasso/model.hpp"
#include "hblasso/rng.hpp"

namespace hblasso {

enum class SamplerKind { HBL, HBL_FIXED_ETA, BL, MBL, TBL, HBL_UNCOND };

inline const char* sampler_name(SamplerKind k) {
    switch (k) {
        case SamplerKind::HBL: return "hbl";
        case SamplerKind::HBL_FIXED_ETA: return "hbl-fixed-eta";
        case SamplerKind::BL: return "bl";
        case SamplerKind::MBL: return "mbl";
        case SamplerKind::TBL: return "tbl";
        case SamplerKind::HBL_UNCOND: return "hbl-uncond";
    }
    return "?";
}

struct FitConfig {
    int iterations = 2500;
    int burn_in = 500;
    int thin = 1;
    Hyperparams hyper;
    SamplerKind kind = SamplerKind::HBL;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    bool store_latent = false; // also keep tau2 / sigma2 columns

    void validate() const {
        if (iterations < 1 || burn_in < 0 || burn_in >= iterations)
            throw std::invalid_argument("FitConfig: need 0 <= burn_in < iterations");
        if (thin < 1) throw std::invalid_argument("FitConfig: thin must be >= 1");
        hyper.validate();
    }
};

// bookkeeping for the eta fixed-point step and the tau2 degeneracy guard
struct ChainDiagnostics {
    long fp_calls = 0;
    long fp_converged = 0;
    long fp_iterations = 0;
    long degenerate_tau_draws = 0;

    double fp_convergence_rate() const {
        return fp_calls == 0 ? 1.0 : static_cast<double>(fp_converged) / fp_calls;
    }
    double fp_mean_iterations() const {
        return fp_calls == 0 ? 0.0 : static_cast<double>(fp_iterations) / fp_calls;
    }
};

namespace detail {

[[noreturn]] inline void sampler_error(const char* step, int iteration, const std::exception& e) {
    throw std::runtime_error("sampler failure in step '" + std::string(step) +
                             "' at iteration " + std::to_string(iteration) + ": " + e.what());
}

// flat-prior intercept reconstruction: given per-observation precisions w_i
// and residuals r_i of the fitted (centered) data, the intercept of the
// fitted model has conditional N(sum w r / sum w, 1 / sum w)
inline double draw_intercept(const Eigen::VectorXd& resid, const Eigen::VectorXd& weights,
                             RngStream& rng) {
    const double wsum = weights.sum();
    const double mean = weights.dot(resid) / wsum;
    return mean + rng.normal() / std::sqrt(wsum);
}

} // namespace detail

// beta | tau2, sigma2, rho2 ~ N(A^{-1} X' D_sigma^{-1} y, A^{-1}),
// A = X' D_sigma^{-1} X + (1/rho2) D_tau^{-1}
inline Eigen::VectorXd update_beta(const ChainState& state, const Dataset& data, RngStream& rng) {
    const Eigen::VectorXd w = state.sigma2.cwiseInverse();
    Eigen::MatrixXd prec = data.x.transpose() * w.asDiagonal() * data.x;
    prec.diagonal() += state.tau2.cwiseInverse() / state.rho2;
    const Eigen::VectorXd h = data.x.transpose() * (w.asDiagonal() * data.y);
    return sample_mvn_from_precision(h, prec, rng);
}

// rho2 | . ~ GIG(-n - p/2, eta sum sigma_i^{-2}, eta sum sigma_i^2 + beta' D_tau^{-1} beta)
inline double update_rho2(const ChainState& state, const Dataset& data, RngStream& rng) {
    const double n = static_cast<double>(data.n());
    const double p = static_cast<double>(data.p());
    const double a = state.eta * state.sigma2.cwiseInverse().sum();
    const double b = state.eta * state.sigma2.sum() +
                     state.beta.cwiseProduct(state.tau2.cwiseInverse()).dot(state.beta);
    return sample_gig_ab(-n - 0.5 * p, a, b, rng);
}

// 1/tau_j^2 | . ~ InvGauss(sqrt(lambda2 rho2 / beta_j^2), lambda2), returned as tau_j^2
inline Eigen::VectorXd update_tau2(const ChainState& state, RngStream& rng,
                                   ChainDiagnostics* diag = nullptr) {
    Eigen::VectorXd tau2(state.beta.size());
    for (Eigen::Index j = 0; j < state.beta.size(); ++j) {
        double b2 = state.beta[j] * state.beta[j];
        if (b2 < 1e-300) {
            b2 = 1e-300;
            if (diag) ++diag->degenerate_tau_draws;
        }
        const double mu = std::sqrt(state.lambda2 * state.rho2 / b2);
        const double inv = sample_inv_gauss(mu, state.lambda2, rng);
        tau2[j] = std::max(1.0 / inv, 1e-250);
    }
    return tau2;
}

// 1/sigma_i^2 | . ~ InvGauss(sqrt(eta / (rho2 ((y_i - x_i' beta)^2 + eta rho2))), eta / rho2)
inline Eigen::VectorXd update_sigma2(const ChainState& state, const Dataset& data, RngStream& rng) {
    const Eigen::VectorXd resid = data.y - data.x * state.beta;
    Eigen::VectorXd sigma2(resid.size());
    for (Eigen::Index i = 0; i < resid.size(); ++i) {
        const double mu = std::sqrt(state.eta /
            (state.rho2 * (resid[i] * resid[i] + state.eta * state.rho2)));
        sigma2[i] = 1.0 / sample_inv_gauss(mu, state.eta / state.rho2, rng);
    }
    return sigma2;
}

// lambda2 | tau2 ~ Ga(a + p, b + sum tau_j^2 / 2)
inline double update_lambda2(const ChainState& state, const Hyperparams& hyper, RngStream& rng) {
    const double p = static_cast<double>(state.tau2.size());
    return sample_gamma(hyper.a + p, hyper.b + 0.5 * state.tau2.sum(), rng);
}

// eta | sigma2, rho2 ~~ Ga(A, B) via the gamma fixed-point approximation
inline double update_eta(const ChainState& state, const Hyperparams& hyper, RngStream& rng,
                         ChainDiagnostics* diag = nullptr) {
    const int n = static_cast<int>(state.sigma2.size());
    const double P = compute_p(state.sigma2, state.rho2);
    const GammaApprox g = solve_ab(n, P, hyper.c, hyper.d, hyper.fp_max_iter, hyper.fp_tol);
    if (diag) {
        ++diag->fp_calls;
        if (g.converged) ++diag->fp_converged;
        diag->fp_iterations += g.iterations_used;
    }
    return sample_gamma(g.A, g.B, rng);
}

namespace detail {

// One in-place sweep in the paper's order: beta, rho2, (tau2, sigma2),
// lambda2, eta. The unconditional-prior variant drops the rho2 factor from
// the beta prior (precision X'D_sigma^{-1}X + D_tau^{-1}, rho2 order -n, tau
// without rho2) and keeps lambda and eta fixed. resid is a reusable buffer
// holding y - X beta at the new beta on exit.
inline void hbl_sweep(ChainState& state, const Dataset& data, const FitConfig& config,
                      RngStream& rng, ChainDiagnostics* diag, int iteration,
                      Eigen::VectorXd& resid) {
    const bool uncond = config.kind == SamplerKind::HBL_UNCOND;
    const Eigen::Index n = data.n(), p = data.p();
    try {
        const Eigen::VectorXd w = state.sigma2.cwiseInverse();
        Eigen::MatrixXd prec = data.x.transpose() * w.asDiagonal() * data.x;
        if (uncond)
            prec.diagonal() += state.tau2.cwiseInverse();
        else
            prec.diagonal() += state.tau2.cwiseInverse() / state.rho2;
        state.beta =
            sample_mvn_from_precision(data.x.transpose() * (w.asDiagonal() * data.y), prec, rng);
    } catch (const std::exception& e) {
        sampler_error("beta", iteration, e);
    }
    resid.noalias() = data.y - data.x * state.beta;
    try {
        const double a = state.eta * state.sigma2.cwiseInverse().sum();
        double b = state.eta * state.sigma2.sum();
        double order = -static_cast<double>(n);
        if (!uncond) {
            b += state.beta.cwiseProduct(state.tau2.cwiseInverse()).dot(state.beta);
            order -= 0.5 * static_cast<double>(p);
        }
        state.rho2 = sample_gig_ab(order, a, b, rng);
    } catch (const std::exception& e) {
        sampler_error("rho2", iteration, e);
    }
    const double tau_scale = uncond ? 1.0 : state.rho2;
    for (Eigen::Index j = 0; j < p; ++j) {
        double b2 = state.beta[j] * state.beta[j];
        if (b2 < 1e-300) {
            b2 = 1e-300;
            if (diag) ++diag->degenerate_tau_draws;
        }
        const double mu = std::sqrt(state.lambda2 * tau_scale / b2);
        state.tau2[j] = std::max(1.0 / sample_inv_gauss(mu, state.lambda2, rng), 1e-250);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mu = std::sqrt(
            state.eta / (state.rho2 * (resid[i] * resid[i] + state.eta * state.rho2)));
        state.sigma2[i] = 1.0 / sample_inv_gauss(mu, state.eta / state.rho2, rng);
    }
    if (config.hyper.lambda_mode == LambdaMode::Learned)
        state.lambda2 = update_lambda2(state, config.hyper, rng);
    if (!uncond && config.hyper.eta_mode == EtaMode::Learned)
        state.eta = update_eta(state, config.hyper, rng, diag);
}

} // namespace detail

// One sweep in the paper's order: beta, rho2, (tau2, sigma2), lambda2, eta.
// With eta_mode/lambda_mode fixed the respective components stay untouched.
inline ChainState gibbs_step(const ChainState& state, const Dataset& data,
                             const FitConfig& config, RngStream& rng,
                             ChainDiagnostics* diag = nullptr, int iteration = -1) {
    ChainState next = state;
    Eigen::VectorXd resid(data.n());
    detail::hbl_sweep(next, data, config, rng, diag, iteration, resid);
    return next;
}

namespace detail {

// Ridge start with the error scale set from the degrees-of-freedom-corrected
// residual variance, and sigma_i^2 started at that same scale. Starting the
// mixture variances at the data scale matters for very large fixed eta, where
// the (rho2, sigma2) pair mixes in O(eta) sweeps and would otherwise stay
// glued to an arbitrary starting point.
inline ChainState initial_state(const Dataset& data, const FitConfig& config) {
    const Eigen::Index n = data.n(), p = data.p();
    Eigen::MatrixXd xtx = data.x.transpose() * data.x;
    xtx.diagonal().array() += 1.0;
    ChainState s;
    s.beta = Eigen::LLT<Eigen::MatrixXd>(xtx).solve(data.x.transpose() * data.y);
    s.tau2 = Eigen::VectorXd::Ones(p);
    const Eigen::VectorXd resid = data.y - data.x * s.beta;
    const double dof = std::max<double>(1.0, static_cast<double>(n - p));
    s.rho2 = std::max(resid.squaredNorm() / dof, 1e-12);
    s.sigma2 = Eigen::VectorXd::Constant(n, s.rho2);
    s.lambda2 = (config.hyper.lambda_mode == LambdaMode::Fixed)
                    ? config.hyper.lambda_fixed * config.hyper.lambda_fixed
                    : 1.0;
    s.eta = (config.hyper.eta_mode == EtaMode::Fixed) ? config.hyper.eta_fixed : 1.0;
    return s;
}

struct StorageLayout {
    std::vector<std::string> names;
    int stored = 0;
};

inline int stored_draws(const FitConfig& c) {
    return (c.iterations - c.burn_in) / c.thin;
}

} // namespace detail

// Huberized-lasso chains (HBL learned eta, HBL fixed eta, unconditional-prior
// variant). Records b0 (reconstructed intercept of the fitted data), the
// coefficients, rho2, lambda2 and eta; deterministic given (seed, stream).
inline PosteriorSamples run_hbl_chain(const Dataset& data, const FitConfig& config,
                                      ChainDiagnostics* diag = nullptr,
                                      const ChainState* init = nullptr) {
    data.validate();
    config.validate();
    const Eigen::Index n = data.n(), p = data.p();
    RngStream rng(config.seed, config.stream);
    ChainState state = init ? *init : detail::initial_state(data, config);

    PosteriorSamples out;
    out.burn_in = config.burn_in;
    out.thin = config.thin;
    out.names.push_back("b0");
    for (Eigen::Index j = 1; j <= p; ++j) out.names.push_back("b" + std::to_string(j));
    out.names.insert(out.names.end(), {"rho2", "lambda2", "eta"});
    if (config.store_latent) {
        for (Eigen::Index j = 1; j <= p; ++j) out.names.push_back("tau2_" + std::to_string(j));
        for (Eigen::Index i = 1; i <= n; ++i) out.names.push_back("sigma2_" + std::to_string(i));
    }
    const int rows = detail::stored_draws(config);
    out.draws.resize(rows, static_cast<Eigen::Index>(out.names.size()));

    int kept = 0;
    Eigen::VectorXd resid(n);
    for (int it = 0; it < config.iterations; ++it) {
        detail::hbl_sweep(state, data, config, rng, diag, it, resid);

        if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0 && kept < rows) {
            const double b0 = detail::draw_intercept(resid, state.sigma2.cwiseInverse(), rng);
            out.draws(kept, 0) = b0;
            for (Eigen::Index j = 0; j < p; ++j) out.draws(kept, 1 + j) = state.beta[j];
            out.draws(kept, 1 + p) = state.rho2;
            out.draws(kept, 2 + p) = state.lambda2;
            out.draws(kept, 3 + p) = state.eta;
            if (config.store_latent) {
                for (Eigen::Index j = 0; j < p; ++j) out.draws(kept, 4 + p + j) = state.tau2[j];
                for (Eigen::Index i = 0; i < n; ++i) out.draws(kept, 4 + 2 * p + i) = state.sigma2[i];
            }
            ++kept;
        }
    }
    return out;
}

namespace detail {

// Park-Casella Bayesian lasso: y ~ N(X beta, sigma2 I),
// beta | tau2, sigma2 ~ N(0, sigma2 D_tau), pi(sigma2) ~ 1/sigma2,
// lambda2 ~ Ga(a, b)
inline PosteriorSamples run_bl_chain(const Dataset& data, const FitConfig& config) {
    const Eigen::Index n = data.n(), p = data.p();
    RngStream rng(config.seed, config.stream);
    const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
    const Eigen::VectorXd xty = data.x.transpose() * data.y;

    ChainState init = initial_state(data, config);
    Eigen::VectorXd beta = init.beta;
    Eigen::VectorXd tau2 = Eigen::VectorXd::Ones(p);
    double sigma2 = init.rho2;
    double lambda2 = (config.hyper.lambda_mode == LambdaMode::Fixed)
                         ? config.hyper.lambda_fixed * config.hyper.lambda_fixed
                         : 1.0;

    PosteriorSamples out;
    out.burn_in = config.burn_in;
    out.thin = config.thin;
    out.names.push_back("b0");
    for (Eigen::Index j = 1; j <= p; ++j) out.names.push_back("b" + std::to_string(j));
    out.names.insert(out.names.end(), {"sigma2", "lambda2"});
    const int rows = stored_draws(config);
    out.draws.resize(rows, static_cast<Eigen::Index>(out.names.size()));

    int kept = 0;
    for (int it = 0; it < config.iterations; ++it) {
        try {
            Eigen::MatrixXd prec = xtx;
            prec.diagonal() += tau2.cwiseInverse();
            prec /= sigma2;
            beta = sample_mvn_from_precision(xty / sigma2, prec, rng);
        } catch (const std::exception& e) {
            sampler_error("beta", it, e);
        }
        const Eigen::VectorXd resid = data.y - data.x * beta;
        const double scale = 0.5 * resid.squaredNorm() +
                             0.5 * beta.cwiseProduct(tau2.cwiseInverse()).dot(beta);
        sigma2 = scale / rng.gamma(0.5 * (n - 1.0) + 0.5 * p, 1.0);
        for (Eigen::Index j = 0; j < p; ++j) {
            const double b2 = std::max(beta[j] * beta[j], 1e-300);
            const double mu = std::sqrt(lambda2 * sigma2 / b2);
            tau2[j] = std::max(1.0 / sample_inv_gauss(mu, lambda2, rng), 1e-250);
        }
        if (config.hyper.lambda_mode == LambdaMode::Learned)
            lambda2 = rng.gamma(config.hyper.a + p, config.hyper.b + 0.5 * tau2.sum());

        if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0 && kept < rows) {
            const Eigen::VectorXd r = data.y - data.x * beta;
            const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / sigma2);
            out.draws(kept, 0) = draw_intercept(r, w, rng);
            for (Eigen::Index j = 0; j < p; ++j) out.draws(kept, 1 + j) = beta[j];
            out.draws(kept, 1 + p) = sigma2;
            out.draws(kept, 2 + p) = lambda2;
            ++kept;
        }
    }
    return out;
}

// Bayesian median lasso through the asymmetric-Laplace scale mixture at
// quantile 1/2 (theta = 0, kappa^2 = 8 in the usual parameterization):
//   eps_i | s, v_i ~ N(0, 8 s v_i),  v_i | s ~ Exp(rate 1/s),
//   beta | tau2, s ~ N(0, s D_tau),  pi(s) ~ 1/s,  lambda2 ~ Ga(a, b),
// so marginally eps is Laplace with ALD scale s (variance 8 s^2).
// Full conditionals: v_i ~ GIG(1/2, 2/s, eps_i^2 / (8 s)),
//   s ~ InvGamma(3n/2 + p/2, sum eps_i^2/(16 v_i) + sum v_i + beta' D_tau^{-1} beta / 2),
//   1/tau_j^2 ~ InvGauss(sqrt(lambda2 s / beta_j^2), lambda2).
inline PosteriorSamples run_mbl_chain(const Dataset& data, const FitConfig& config) {
    const Eigen::Index n = data.n(), p = data.p();
    RngStream rng(config.seed, config.stream);

    ChainState init = initial_state(data, config);
    Eigen::VectorXd beta = init.beta;
    Eigen::VectorXd tau2 = Eigen::VectorXd::Ones(p);
    double s = std::max(std::sqrt(init.rho2 / 8.0), 1e-8); // ALD scale
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, s);
    double lambda2 = (config.hyper.lambda_mode == LambdaMode::Fixed)
                         ? config.hyper.lambda_fixed * config.hyper.lambda_fixed
                         : 1.0;

    PosteriorSamples out;
    out.burn_in = config.burn_in;
    out.thin = config.thin;
    out.names.push_back("b0");
    for (Eigen::Index j = 1; j <= p; ++j) out.names.push_back("b" + std::to_string(j));
    out.names.insert(out.names.end(), {"sigma2", "lambda2"});
    const int rows = stored_draws(config);
    out.draws.resize(rows, static_cast<Eigen::Index>(out.names.size()));

    int kept = 0;
    for (int it = 0; it < config.iterations; ++it) {
        const Eigen::VectorXd u = (8.0 * s * v.array()).inverse(); // per-obs precisions
        try {
            Eigen::MatrixXd prec = data.x.transpose() * u.asDiagonal() * data.x;
            prec.diagonal() += tau2.cwiseInverse() / s;
            beta = sample_mvn_from_precision(data.x.transpose() * (u.asDiagonal() * data.y),
                                             prec, rng);
        } catch (const std::exception& e) {
            sampler_error("beta", it, e);
        }
        const Eigen::VectorXd resid = data.y - data.x * beta;
        for (Eigen::Index i = 0; i < n; ++i)
            v[i] = sample_gig_ab(0.5, 2.0 / s,
                                 std::max(resid[i] * resid[i] / (8.0 * s), 1e-280), rng);
        const double scale = resid.cwiseQuotient(v).dot(resid) / 16.0 + v.sum() +
                             0.5 * beta.cwiseProduct(tau2.cwiseInverse()).dot(beta);
        s = scale / rng.gamma(1.5 * n + 0.5 * p, 1.0);
        for (Eigen::Index j = 0; j < p; ++j) {
            const double b2 = std::max(beta[j] * beta[j], 1e-300);
            tau2[j] = std::max(1.0 / sample_inv_gauss(std::sqrt(lambda2 * s / b2), lambda2, rng),
                               1e-250);
        }
        if (config.hyper.lambda_mode == LambdaMode::Learned)
            lambda2 = rng.gamma(config.hyper.a + p, config.hyper.b + 0.5 * tau2.sum());

        if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0 && kept < rows) {
            const Eigen::VectorXd r = data.y - data.x * beta;
            const Eigen::VectorXd wint = (8.0 * s * v.array()).inverse();
            out.draws(kept, 0) = draw_intercept(r, wint, rng);
            for (Eigen::Index j = 0; j < p; ++j) out.draws(kept, 1 + j) = beta[j];
            out.draws(kept, 1 + p) = s;
            out.draws(kept, 2 + p) = lambda2;
            ++kept;
        }
    }
    return out;
}

// t3-error lasso through the inverse-gamma scale mixture:
//   eps_i | sigma2, psi_i ~ N(0, sigma2 psi_i),  psi_i ~ InvGamma(3/2, 3/2),
//   beta | tau2, sigma2 ~ N(0, sigma2 D_tau),  pi(sigma2) ~ 1/sigma2.
// Full conditionals: psi_i ~ InvGamma(2, (3 + eps_i^2 / sigma2) / 2),
//   sigma2 ~ InvGamma((n + p)/2, (sum eps_i^2/psi_i + beta' D_tau^{-1} beta)/2).
inline PosteriorSamples run_tbl_chain(const Dataset& data, const FitConfig& config) {
    const Eigen::Index n = data.n(), p = data.p();
    RngStream rng(config.seed, config.stream);

    ChainState init = initial_state(data, config);
    Eigen::VectorXd beta = init.beta;
    Eigen::VectorXd tau2 = Eigen::VectorXd::Ones(p);
    Eigen::VectorXd psi = Eigen::VectorXd::Ones(n);
    double sigma2 = init.rho2;
    double lambda2 = (config.hyper.lambda_mode == LambdaMode::Fixed)
                         ? config.hyper.lambda_fixed * config.hyper.lambda_fixed
                         : 1.0;

    PosteriorSamples out;
    out.burn_in = config.burn_in;
    out.thin = config.thin;
    out.names.push_back("b0");
    for (Eigen::Index j = 1; j <= p; ++j) out.names.push_back("b" + std::to_string(j));
    out.names.insert(out.names.end(), {"sigma2", "lambda2"});
    const int rows = stored_draws(config);
    out.draws.resize(rows, static_cast<Eigen::Index>(out.names.size()));

    int kept = 0;
    for (int it = 0; it < config.iterations; ++it) {
        try {
            const Eigen::VectorXd wi = psi.cwiseInverse();
            Eigen::MatrixXd prec = data.x.transpose() * wi.asDiagonal() * data.x;
            prec.diagonal() += tau2.cwiseInverse();
            prec /= sigma2;
            beta = sample_mvn_from_precision(
                data.x.transpose() * (wi.asDiagonal() * data.y) / sigma2, prec, rng);
        } catch (const std::exception& e) {
            sampler_error("beta", it, e);
        }
        const Eigen::VectorXd resid = data.y - data.x * beta;
        for (Eigen::Index i = 0; i < n; ++i)
            psi[i] = (0.5 * (3.0 + resid[i] * resid[i] / sigma2)) / rng.gamma(2.0, 1.0);
        const double scale = 0.5 * resid.cwiseProduct(psi.cwiseInverse()).dot(resid) +
                             0.5 * beta.cwiseProduct(tau2.cwiseInverse()).dot(beta);
        sigma2 = scale / rng.gamma(0.5 * (n + p), 1.0);
        for (Eigen::Index j = 0; j < p; ++j) {
            const double b2 = std::max(beta[j] * beta[j], 1e-300);
            tau2[j] = std::max(
                1.0 / sample_inv_gauss(std::sqrt(lambda2 * sigma2 / b2), lambda2, rng), 1e-250);
        }
        if (config.hyper.lambda_mode == LambdaMode::Learned)
            lambda2 = rng.gamma(config.hyper.a + p, config.hyper.b + 0.5 * tau2.sum());

        if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0 && kept < rows) {
            const Eigen::VectorXd r = data.y - data.x * beta;
            const Eigen::VectorXd w = (sigma2 * psi).cwiseInverse();
            out.draws(kept, 0) = draw_intercept(r, w, rng);
            for (Eigen::Index j = 0; j < p; ++j) out.draws(kept, 1 + j) = beta[j];
            out.draws(kept, 1 + p) = sigma2;
            out.draws(kept, 2 + p) = lambda2;
            ++kept;
        }
    }
    return out;
}

} // namespace detail

inline PosteriorSamples run_baseline(SamplerKind kind, const Dataset& data,
                                     const FitConfig& config_in) {
    FitConfig config = config_in;
    config.kind = kind;
    data.validate();
    config.validate();
    switch (kind) {
        case SamplerKind::BL: return detail::run_bl_chain(data, config);
        case SamplerKind::MBL: return detail::run_mbl_chain(data, config);
        case SamplerKind::TBL: return detail::run_tbl_chain(data, config);
        default: throw std::invalid_argument("run_baseline: kind must be BL, MBL or TBL");
    }
}

inline PosteriorSamples run_unconditional_prior_chain(const Dataset& data,
                                                      const FitConfig& config_in,
                                                      double lambda_fixed, double eta_fixed,
                                                      ChainDiagnostics* diag = nullptr) {
    FitConfig config = config_in;
    config.kind = SamplerKind::HBL_UNCOND;
    config.hyper.eta_mode = EtaMode::Fixed;
    config.hyper.eta_fixed = eta_fixed;
    config.hyper.lambda_mode = LambdaMode::Fixed;
    config.hyper.lambda_fixed = lambda_fixed;
    return run_hbl_chain(data, config, diag);
}

// Dispatch over every sampler kind; deterministic given (seed, stream).
inline PosteriorSamples run_chain(const Dataset& data, const FitConfig& config,
                                  ChainDiagnostics* diag = nullptr) {
    switch (config.kind) {
        case SamplerKind::HBL:
            return run_hbl_chain(data, config, diag);
        case SamplerKind::HBL_FIXED_ETA: {
            FitConfig c = config;
            c.kind = SamplerKind::HBL;
            c.hyper.eta_mode = EtaMode::Fixed;
            if (!(c.hyper.eta_fixed > 0.0))
                throw std::invalid_argument("run_chain: fixed-eta chain needs eta_fixed > 0");
            return run_hbl_chain(data, c, diag);
        }
        case SamplerKind::HBL_UNCOND:
            return run_hbl_chain(data, config, diag);
        case SamplerKind::BL:
        case SamplerKind::MBL:
        case SamplerKind::TBL:
            return run_baseline(config.kind, data, config);
    }
    throw std::invalid_argument("run_chain: unknown sampler kind");
}

} // namespace hblasso

#endif
