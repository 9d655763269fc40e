#ifndef HBLASSO_EXPERIMENTS_HPP
#define HBLASSO_EXPERIMENTS_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "hblasso/diagnostics.hpp"
#include "hblasso/gibbs.hpp"
#include "hblasso/io.hpp"
#include "hblasso/model.hpp"

namespace hblasso {

// bounded worker pool over an index range; tasks must be independent
inline void parallel_for(int count, const std::function<void(int)>& task, int threads = 0) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// simulation scenarios: p = 20 covariates from N_p(0, Sigma), Sigma_ij = r^|i-j|,
// coefficients (1, 3, 0.5, 0, 1, 0, 0, 1.5, 0, 0, 0, 1, 0, ...), noise by model:
//   1: Gaussian, sigma = 2,    r = 0.5
//   2: Gaussian, sigma = 2,    r = 0.95
//   3: contaminated 0.9 N(0,1) + 0.1 N(0,225) scaled by 1/4.83, sigma = 9.67, r = 0.5
//   4: Laplace(0,1)/sqrt(2), sigma = 9.67, r = 0.5
struct ScenarioSpec {
    int model_id = 1;
    int n = 100;
    int p = 20;
    double r = 0.5;
    double sigma = 2.0;
    Eigen::VectorXd beta_truth; // (p+1) with the intercept first
    int replications = 50;
    std::uint64_t seed = 1;
};

inline ScenarioSpec make_scenario(int model_id, int n, std::uint64_t seed = 1,
                                  int replications = 50) {
    ScenarioSpec s;
    s.model_id = model_id;
    s.n = n;
    s.seed = seed;
    s.replications = replications;
    switch (model_id) {
        case 1: s.sigma = 2.0; s.r = 0.5; break;
        case 2: s.sigma = 2.0; s.r = 0.95; break;
        case 3: s.sigma = 9.67; s.r = 0.5; break;
        case 4: s.sigma = 9.67; s.r = 0.5; break;
        default: throw std::invalid_argument("make_scenario: model_id must be 1..4");
    }
    s.beta_truth = Eigen::VectorXd::Zero(s.p + 1);
    s.beta_truth[0] = 1.0;  // intercept
    s.beta_truth[1] = 3.0;
    s.beta_truth[2] = 0.5;
    s.beta_truth[4] = 1.0;
    s.beta_truth[7] = 1.5;
    s.beta_truth[11] = 1.0;
    return s;
}

namespace detail {

inline double scenario_noise(int model_id, RngStream& rng) {
    switch (model_id) {
        case 1:
        case 2:
            return rng.normal();
        case 3: {
            // 0.9 N(0,1) + 0.1 N(0,225), standardized by sqrt(var(V)) = 4.83
            const double v = (rng.uniform() < 0.9) ? rng.normal() : 15.0 * rng.normal();
            return v / 4.83;
        }
        case 4: {
            // Laplace(0,1) has variance 2
            const double e = rng.exponential(1.0);
            const double s = (rng.uniform() < 0.5) ? -1.0 : 1.0;
            return s * e / std::sqrt(2.0);
        }
    }
    throw std::invalid_argument("scenario_noise: unknown model");
}

} // namespace detail

// one replication of the scenario; deterministic per (seed, rep_index)
inline Dataset gen_scenario(const ScenarioSpec& spec, int rep_index) {
    RngStream rng(spec.seed, 1000003ULL * static_cast<std::uint64_t>(rep_index + 1));
    Eigen::MatrixXd corr(spec.p, spec.p);
    for (int i = 0; i < spec.p; ++i)
        for (int j = 0; j < spec.p; ++j) corr(i, j) = std::pow(spec.r, std::abs(i - j));
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(corr).matrixL();

    Dataset d;
    d.x.resize(spec.n, spec.p);
    d.y.resize(spec.n);
    Eigen::VectorXd z(spec.p);
    for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < spec.p; ++j) z[j] = rng.normal();
        d.x.row(i) = (chol * z).transpose();
    }
    for (int i = 0; i < spec.n; ++i) {
        const double mean = spec.beta_truth[0] + d.x.row(i).dot(spec.beta_truth.tail(spec.p));
        d.y[i] = mean + spec.sigma * detail::scenario_noise(spec.model_id, rng);
    }
    return d;
}

struct SimCell {
    std::string method;
    int model = 0;
    int n = 0;
    double rmse = 0.0;
    double al = 0.0;
    double cp = 0.0;
    int replications = 0;
    int failures = 0;
};

struct SimStudyResult {
    std::vector<SimCell> cells;
    // posterior median of eta per replication, HBL only, keyed like cells
    std::vector<std::pair<int, std::vector<double>>> hbl_eta_medians; // (model, per-rep)
};

// metrics of one fitted chain against the scenario truth, on the raw scale
inline SimMetrics chain_sim_metrics(const PosteriorSamples& samples, const Dataset& fitted,
                                    const Eigen::VectorXd& truth) {
    const Eigen::MatrixXd coefs = original_scale_coefficients(samples, fitted);
    const Eigen::Index k = coefs.cols();
    Eigen::VectorXd est(k), lo(k), hi(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        est[j] = quantile(coefs.col(j), 0.5);
        lo[j] = quantile(coefs.col(j), 0.025);
        hi[j] = quantile(coefs.col(j), 0.975);
    }
    return sim_metrics(est, truth, lo, hi);
}

// The Tables 1-4 harness: per (model, method), mean RMSE / AL / CP across
// replications at the requested chain length; per-replication chains and
// datasets get independent streams, so results do not depend on scheduling.
inline SimStudyResult run_simulation_study(const std::vector<int>& models, int n,
                                           const std::vector<SamplerKind>& methods,
                                           int replications, int iterations, int burn_in,
                                           std::uint64_t seed, int threads = 0) {
    SimStudyResult result;
    for (int model : models) {
        const ScenarioSpec spec = make_scenario(model, n, seed, replications);
        std::vector<std::vector<SimMetrics>> metrics(methods.size());
        std::vector<std::vector<int>> fails(methods.size());
        for (auto& v : metrics) v.resize(replications);
        for (auto& v : fails) v.assign(replications, 0);
        std::vector<double> eta_medians(replications, 0.0);
        bool has_hbl = false;
        for (auto k : methods) has_hbl = has_hbl || k == SamplerKind::HBL;

        parallel_for(replications, [&](int rep) {
            const Dataset raw = gen_scenario(spec, rep);
            const Dataset fitted = center(raw);
            for (std::size_t m = 0; m < methods.size(); ++m) {
                FitConfig cfg;
                cfg.kind = methods[m];
                cfg.iterations = iterations;
                cfg.burn_in = burn_in;
                cfg.seed = seed;
                cfg.stream = 1000003ULL * static_cast<std::uint64_t>(rep + 1) + 1 + m;
                try {
                    const PosteriorSamples samples = run_chain(fitted, cfg);
                    metrics[m][rep] = chain_sim_metrics(samples, fitted, spec.beta_truth);
                    if (methods[m] == SamplerKind::HBL)
                        eta_medians[rep] = quantile(samples.column("eta"), 0.5);
                } catch (const std::exception&) {
                    fails[m][rep] = 1;
                }
            }
        }, threads);

        for (std::size_t m = 0; m < methods.size(); ++m) {
            SimCell cell;
            cell.method = sampler_name(methods[m]);
            cell.model = model;
            cell.n = n;
            int ok = 0;
            for (int rep = 0; rep < replications; ++rep) {
                if (fails[m][rep]) {
                    ++cell.failures;
                    continue;
                }
                ++ok;
                cell.rmse += metrics[m][rep].rmse;
                cell.al += metrics[m][rep].al;
                cell.cp += metrics[m][rep].cp;
            }
            if (ok > 0) {
                cell.rmse /= ok;
                cell.al /= ok;
                cell.cp /= ok;
            }
            cell.replications = ok;
            result.cells.push_back(cell);
        }
        if (has_hbl) result.hbl_eta_medians.emplace_back(model, eta_medians);
    }
    return result;
}

// ---- sensitivity analysis -------------------------------------------------

struct SensitivityCurve {
    std::string parameter; // one of a, b, c, d
    double value = 1.0;
    Eigen::VectorXd x_grid;   // 50 points in [-2, 2]
    Eigen::VectorXd y_fitted; // posterior-mean fitted values x_i' beta_hat
    Eigen::VectorXd y_true;
};

// logistic-feature design of the hyper-parameter sensitivity study
inline Dataset sensitivity_dataset(std::uint64_t seed, Eigen::VectorXd* x_grid_out = nullptr,
                                   Eigen::VectorXd* y_true_out = nullptr) {
    const int n = 50;
    RngStream rng(seed);
    Eigen::VectorXd grid(n);
    for (int i = 0; i < n; ++i) grid[i] = -2.0 + 4.0 * i / (n - 1.0);
    Dataset d;
    d.x.resize(n, 4);
    d.y.resize(n);
    Eigen::VectorXd ytrue(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid[i];
        d.x(i, 0) = 1.0 / (1.0 + std::exp(-4.0 * (x - 0.3)));
        d.x(i, 1) = 1.0 / (1.0 + std::exp(3.0 * (x - 0.2)));
        d.x(i, 2) = 1.0 / (1.0 + std::exp(-4.0 * (x - 0.7)));
        d.x(i, 3) = 1.0 / (1.0 + std::exp(5.0 * (x - 0.8)));
        ytrue[i] = d.x.row(i).sum(); // beta = (1, 1, 1, 1)
        d.y[i] = ytrue[i] + 0.03 * sample_hyperbolic(1.0, 1.0, rng);
    }
    if (x_grid_out) *x_grid_out = grid;
    if (y_true_out) *y_true_out = ytrue;
    return d;
}

// vary one of (a, b, c, d) with the others held at 1; 3000 draws after 1000
// burn-in per setting; fitted values use posterior means
inline std::vector<SensitivityCurve> run_sensitivity(const std::string& parameter,
                                                     const std::vector<double>& values,
                                                     std::uint64_t seed, int iterations = 4000,
                                                     int burn_in = 1000) {
    if (parameter != "a" && parameter != "b" && parameter != "c" && parameter != "d")
        throw std::invalid_argument("run_sensitivity: parameter must be a, b, c or d");
    Eigen::VectorXd grid, ytrue;
    const Dataset raw = sensitivity_dataset(seed, &grid, &ytrue);
    const Dataset fitted = center(raw);
    std::vector<SensitivityCurve> out;
    for (double v : values) {
        FitConfig cfg;
        cfg.iterations = iterations;
        cfg.burn_in = burn_in;
        cfg.seed = seed + 7;
        if (parameter == "a") cfg.hyper.a = v;
        if (parameter == "b") cfg.hyper.b = v;
        if (parameter == "c") cfg.hyper.c = v;
        if (parameter == "d") cfg.hyper.d = v;
        const PosteriorSamples samples = run_chain(fitted, cfg);
        const Eigen::MatrixXd coefs = original_scale_coefficients(samples, fitted);
        const Eigen::VectorXd mean_coefs = coefs.colwise().mean();
        SensitivityCurve curve;
        curve.parameter = parameter;
        curve.value = v;
        curve.x_grid = grid;
        curve.y_true = ytrue;
        curve.y_fitted.resize(raw.n());
        for (Eigen::Index i = 0; i < raw.n(); ++i)
            curve.y_fitted[i] = mean_coefs[0] + raw.x.row(i).dot(mean_coefs.tail(4));
        out.push_back(std::move(curve));
    }
    return out;
}

// ---- multimodality demo ----------------------------------------------------

// kernel-smoothed 2-D mode count with Silverman marginal bandwidths; modes
// are strict 8-neighborhood maxima above rel_floor * peak
struct ModeCount {
    int modes = 0;
    Eigen::MatrixXd density; // grid_n x grid_n, for plotting
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
};

inline ModeCount count_modes_2d(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                int grid_n = 80, double rel_floor = 0.05,
                                double bandwidth_scale = 1.0) {
    const Eigen::Index s = xs.size();
    if (s < 100 || ys.size() != s) throw std::invalid_argument("count_modes_2d: bad input");
    const double mx = xs.mean(), my = ys.mean();
    const double sx = std::sqrt((xs.array() - mx).square().sum() / (s - 1.0));
    const double sy = std::sqrt((ys.array() - my).square().sum() / (s - 1.0));
    const double hx = std::max(bandwidth_scale * 1.06 * sx * std::pow(double(s), -0.2), 1e-9);
    const double hy = std::max(bandwidth_scale * 1.06 * sy * std::pow(double(s), -0.2), 1e-9);

    ModeCount out;
    out.x_lo = xs.minCoeff() - 0.5 * hx;
    out.x_hi = xs.maxCoeff() + 0.5 * hx;
    out.y_lo = ys.minCoeff() - 0.5 * hy;
    out.y_hi = ys.maxCoeff() + 0.5 * hy;
    out.density = Eigen::MatrixXd::Zero(grid_n, grid_n);

    // binned KDE: accumulate points on the grid, then separable gaussian blur
    const double dx = (out.x_hi - out.x_lo) / (grid_n - 1);
    const double dy = (out.y_hi - out.y_lo) / (grid_n - 1);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(grid_n, grid_n);
    for (Eigen::Index i = 0; i < s; ++i) {
        const int gx = std::clamp(static_cast<int>(std::lround((xs[i] - out.x_lo) / dx)), 0, grid_n - 1);
        const int gy = std::clamp(static_cast<int>(std::lround((ys[i] - out.y_lo) / dy)), 0, grid_n - 1);
        counts(gx, gy) += 1.0;
    }
    const int rx = std::max(1, static_cast<int>(std::ceil(3.0 * hx / dx)));
    const int ry = std::max(1, static_cast<int>(std::ceil(3.0 * hy / dy)));
    Eigen::VectorXd kx(2 * rx + 1), ky(2 * ry + 1);
    for (int k = -rx; k <= rx; ++k) kx[k + rx] = std::exp(-0.5 * (k * dx) * (k * dx) / (hx * hx));
    for (int k = -ry; k <= ry; ++k) ky[k + ry] = std::exp(-0.5 * (k * dy) * (k * dy) / (hy * hy));
    Eigen::MatrixXd tmp = Eigen::MatrixXd::Zero(grid_n, grid_n);
    for (int i = 0; i < grid_n; ++i)
        for (int k = -rx; k <= rx; ++k) {
            const int src = i + k;
            if (src < 0 || src >= grid_n) continue;
            tmp.row(i) += kx[k + rx] * counts.row(src);
        }
    for (int j = 0; j < grid_n; ++j)
        for (int k = -ry; k <= ry; ++k) {
            const int src = j + k;
            if (src < 0 || src >= grid_n) continue;
            out.density.col(j) += ky[k + ry] * tmp.col(src);
        }

    const double peak = out.density.maxCoeff();
    const double floor = rel_floor * peak;
    for (int i = 1; i + 1 < grid_n; ++i) {
        for (int j = 1; j + 1 < grid_n; ++j) {
            const double v = out.density(i, j);
            if (v < floor) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (out.density(i + di, j + dj) >= v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) ++out.modes;
        }
    }
    return out;
}

struct MultimodalDemoResult {
    PosteriorSamples unconditional;
    PosteriorSamples conditional;
    ModeCount unconditional_modes; // over (b1, b2)
    ModeCount conditional_modes;
    double design_trace = 0.0;
};

// The unconditional-vs-conditional prior demonstration: y = X beta + 0.03 eps
// with eps hyperbolic(1,1), beta = (0, 5), tr(X'X) = 1, lambda = 3, eta = 1.
// Chains are pooled from dispersed starting points so both basins of the
// unconditional posterior appear in the histogram data.
inline MultimodalDemoResult run_multimodality_demo(int n, int iterations, int burn_in,
                                                   std::uint64_t seed, int chains = 8) {
    RngStream rng(seed);
    Eigen::MatrixXd g(n, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = rng.normal();
    g /= std::sqrt(g.squaredNorm()); // tr(X'X) = 1
    Dataset d;
    d.x = g;
    d.y.resize(n);
    Eigen::VectorXd beta_truth(2);
    beta_truth << 0.0, 5.0;
    for (int i = 0; i < n; ++i)
        d.y[i] = d.x.row(i).dot(beta_truth) + 0.03 * sample_hyperbolic(1.0, 1.0, rng);

    MultimodalDemoResult out;
    out.design_trace = d.x.squaredNorm();

    const double lambda = 3.0, eta = 1.0;
    auto pool_chains = [&](SamplerKind kind) {
        FitConfig cfg;
        cfg.kind = kind;
        cfg.iterations = iterations;
        cfg.burn_in = burn_in;
        cfg.seed = seed + 11;
        cfg.hyper.eta_mode = EtaMode::Fixed;
        cfg.hyper.eta_fixed = eta;
        cfg.hyper.lambda_mode = LambdaMode::Fixed;
        cfg.hyper.lambda_fixed = lambda;
        const int kept = (iterations - burn_in);
        PosteriorSamples pooled;
        std::vector<PosteriorSamples> parts(chains);
        parallel_for(chains, [&](int c) {
            ChainState init;
            init.beta = Eigen::VectorXd::Zero(2);
            // spread the starts over the (beta, rho) plane
            RngStream crng(seed + 17, c);
            init.beta[0] = 6.0 * (crng.uniform() - 0.5);
            init.beta[1] = 7.0 * crng.uniform() - 1.0;
            init.tau2 = Eigen::VectorXd::Ones(2);
            init.sigma2 = Eigen::VectorXd::Ones(n);
            init.rho2 = std::exp(crng.uniform(-7.0, 1.0));
            init.lambda2 = lambda * lambda;
            init.eta = eta;
            FitConfig ccfg = cfg;
            ccfg.stream = static_cast<std::uint64_t>(c);
            parts[c] = run_hbl_chain(d, ccfg, nullptr, &init);
        });
        pooled.names = parts[0].names;
        pooled.burn_in = burn_in;
        pooled.thin = 1;
        pooled.draws.resize(static_cast<Eigen::Index>(kept) * chains, parts[0].draws.cols());
        for (int c = 0; c < chains; ++c)
            pooled.draws.middleRows(static_cast<Eigen::Index>(c) * kept, kept) = parts[c].draws;
        return pooled;
    };

    out.unconditional = pool_chains(SamplerKind::HBL_UNCOND);
    out.conditional = pool_chains(SamplerKind::HBL);
    // widened bandwidth and a 10% floor keep Monte Carlo ripples from
    // registering as extra modes
    out.unconditional_modes = count_modes_2d(out.unconditional.column("b1"),
                                             out.unconditional.column("b2"), 80, 0.10, 1.5);
    out.conditional_modes = count_modes_2d(out.conditional.column("b1"),
                                           out.conditional.column("b2"), 80, 0.10, 1.5);
    return out;
}

// ---- timing ----------------------------------------------------------------

struct TimingRow {
    std::string method;
    int p = 0;
    double seconds = 0.0;
};

// true when HBL stays within the factor of every other timed method at every p
inline bool hbl_within_factor(const std::vector<TimingRow>& rows, double factor) {
    for (const auto& h : rows) {
        if (h.method != "hbl") continue;
        for (const auto& other : rows) {
            if (other.p != h.p || other.method == "hbl" || other.method == "bl") continue;
            if (!(h.seconds < factor * other.seconds)) return false;
        }
    }
    return true;
}

// wall-clock per method for Model-1-style data at n = 200 over a p grid
inline std::vector<TimingRow> run_timing(const std::vector<int>& p_grid,
                                         const std::vector<SamplerKind>& methods,
                                         int iterations, int burn_in, int runs,
                                         std::uint64_t seed) {
    std::vector<TimingRow> rows;
    for (int p : p_grid) {
        // remark-style coefficients: (3, 0.5, 1, 1.5, 1, 0, ...)
        ScenarioSpec spec = make_scenario(1, 200, seed);
        spec.p = p;
        spec.beta_truth = Eigen::VectorXd::Zero(p + 1);
        const double head[] = {3.0, 0.5, 1.0, 1.5, 1.0};
        for (int j = 0; j < std::min(p, 5); ++j) spec.beta_truth[j + 1] = head[j];
        const Dataset fitted = center(gen_scenario(spec, 0));
        for (auto kind : methods) {
            FitConfig cfg;
            cfg.kind = kind;
            cfg.iterations = iterations;
            cfg.burn_in = burn_in;
            cfg.seed = seed;
            double total = 0.0;
            for (int r = 0; r < runs; ++r) {
                cfg.stream = static_cast<std::uint64_t>(r);
                const auto t0 = std::chrono::steady_clock::now();
                (void)run_chain(fitted, cfg);
                const auto t1 = std::chrono::steady_clock::now();
                total += std::chrono::duration<double>(t1 - t0).count();
            }
            rows.push_back({sampler_name(kind), p, total / runs});
        }
    }
    return rows;
}

} // namespace hblasso

#endif
