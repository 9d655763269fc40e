#ifndef HBLASSO_COMMANDS_HPP
#define HBLASSO_COMMANDS_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hblasso/diagnostics.hpp"
#include "hblasso/eta_approx.hpp"
#include "hblasso/experiments.hpp"
#include "hblasso/gibbs.hpp"
#include "hblasso/influence.hpp"
#include "hblasso/io.hpp"

namespace hblasso {

inline const char* version_string() { return "0.1.0"; }

struct RunConfig {
    std::string command;
    std::string data_path;
    std::string response = "y";
    std::string out_dir = ".";
    std::string method = "hbl";
    std::string methods = "bl,mbl,tbl,hbl";
    int iterations = 2500;
    int burn_in = 500;
    int thin = 1;
    std::uint64_t seed = 1;
    std::string eta = "learn";    // "learn" or a positive number
    std::string lambda = "learn"; // "learn" or a positive number
    double a = 1.0, b = 1.0, c = 1.0, d = 1.0;
    bool do_standardize = true;
    bool store_latent = false;
    int threads = 0;
    // simulate
    int model = 1;
    int n = 100;
    int reps = 50;
    // validate-approx
    std::string n_grid = "10,50,100,150,200";
    std::string ab_grid = "0.01,0.1,1";
    int datasets = 100;
    int mc_size = 10000;
    // influence
    std::string eta_list = "0.2,0.5,1.0";
    int posterior_draws = 10000;
    int g_draws = 2000;
    // demo-multimodal
    int demo_n = 5;
    int chains = 8;
    // timing
    std::string p_grid = "5,10,20,50,100";
    int runs = 10;
};

// key=value configuration file; keys mirror the CLI long option names.
// Command-line flags take precedence by being applied after the file.
inline void apply_config_entry(RunConfig& rc, const std::string& key, const std::string& value) {
    auto as_int = [&] { return std::stoi(value); };
    auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    auto as_double = [&] { return std::stod(value); };
    auto as_bool = [&] { return value == "1" || value == "true"; };
    if (key == "data") rc.data_path = value;
    else if (key == "response") rc.response = value;
    else if (key == "out") rc.out_dir = value;
    else if (key == "method") rc.method = value;
    else if (key == "methods") rc.methods = value;
    else if (key == "iters") rc.iterations = as_int();
    else if (key == "burn-in") rc.burn_in = as_int();
    else if (key == "thin") rc.thin = as_int();
    else if (key == "seed") rc.seed = as_u64();
    else if (key == "a") rc.a = as_double();
    else if (key == "b") rc.b = as_double();
    else if (key == "c") rc.c = as_double();
    else if (key == "d") rc.d = as_double();
    else if (key == "eta") rc.eta = value;
    else if (key == "lambda") rc.lambda = value;
    else if (key == "standardize") rc.do_standardize = as_bool();
    else if (key == "store-latent") rc.store_latent = as_bool();
    else if (key == "threads") rc.threads = as_int();
    else if (key == "model") rc.model = as_int();
    else if (key == "n") rc.n = as_int();
    else if (key == "reps") rc.reps = as_int();
    else if (key == "n-grid") rc.n_grid = value;
    else if (key == "ab-grid") rc.ab_grid = value;
    else if (key == "datasets") rc.datasets = as_int();
    else if (key == "mc") rc.mc_size = as_int();
    else if (key == "eta-list") rc.eta_list = value;
    else if (key == "posterior-draws") rc.posterior_draws = as_int();
    else if (key == "g-draws") rc.g_draws = as_int();
    else if (key == "chains") rc.chains = as_int();
    else if (key == "p-grid") rc.p_grid = value;
    else if (key == "runs") rc.runs = as_int();
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

inline void load_config_file(RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config file '" + path + "' line " + std::to_string(lineno) +
                                     ": expected key=value");
        apply_config_entry(rc, line.substr(0, eq), line.substr(eq + 1));
    }
}

namespace detail {

inline std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty list: '" + csv + "'");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
    return out;
}

inline SamplerKind parse_method(const std::string& name) {
    if (name == "hbl") return SamplerKind::HBL;
    if (name == "bl") return SamplerKind::BL;
    if (name == "mbl") return SamplerKind::MBL;
    if (name == "tbl") return SamplerKind::TBL;
    throw std::invalid_argument("unknown method '" + name + "' (expected hbl, bl, mbl or tbl)");
}

inline std::vector<SamplerKind> parse_methods(const std::string& csv) {
    std::vector<SamplerKind> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(parse_method(tok));
    }
    if (out.empty()) throw std::invalid_argument("no methods given");
    return out;
}

inline FitConfig make_fit_config(const RunConfig& rc) {
    FitConfig cfg;
    cfg.kind = parse_method(rc.method);
    cfg.iterations = rc.iterations;
    cfg.burn_in = rc.burn_in;
    cfg.thin = rc.thin;
    cfg.seed = rc.seed;
    cfg.store_latent = rc.store_latent;
    cfg.hyper.a = rc.a;
    cfg.hyper.b = rc.b;
    cfg.hyper.c = rc.c;
    cfg.hyper.d = rc.d;
    if (rc.eta == "learn") {
        cfg.hyper.eta_mode = EtaMode::Learned;
    } else {
        cfg.hyper.eta_mode = EtaMode::Fixed;
        cfg.hyper.eta_fixed = std::stod(rc.eta);
    }
    if (rc.lambda == "learn") {
        cfg.hyper.lambda_mode = LambdaMode::Learned;
    } else {
        cfg.hyper.lambda_mode = LambdaMode::Fixed;
        cfg.hyper.lambda_fixed = std::stod(rc.lambda);
    }
    return cfg;
}

inline std::filesystem::path ensure_out_dir(const RunConfig& rc) {
    std::filesystem::path dir(rc.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace detail

// fit: samples.csv, summary.csv and a reproducibility manifest
inline void fit_command(const RunConfig& rc) {
    const auto dir = detail::ensure_out_dir(rc);
    const Dataset raw = load_csv(rc.data_path, rc.response);
    const Dataset fitted = rc.do_standardize ? standardize(raw) : center(raw);
    const FitConfig cfg = detail::make_fit_config(rc);
    ChainDiagnostics diag;
    const PosteriorSamples samples = run_chain(fitted, cfg, &diag);
    write_samples_csv((dir / "samples.csv").string(), samples);
    write_summary_csv((dir / "summary.csv").string(), summarize(samples));

    std::vector<std::pair<std::string, std::string>> manifest = {
        {"command", "fit"},
        {"version", version_string()},
        {"data", rc.data_path},
        {"response", rc.response},
        {"method", rc.method},
        {"iterations", std::to_string(rc.iterations)},
        {"burn_in", std::to_string(rc.burn_in)},
        {"thin", std::to_string(rc.thin)},
        {"seed", std::to_string(rc.seed)},
        {"a", format_g17(rc.a)},
        {"b", format_g17(rc.b)},
        {"c", format_g17(rc.c)},
        {"d", format_g17(rc.d)},
        {"eta", rc.eta},
        {"lambda", rc.lambda},
        {"standardize", rc.do_standardize ? "1" : "0"},
        {"n", std::to_string(fitted.n())},
        {"p", std::to_string(fitted.p())},
        {"stored_draws", std::to_string(samples.draws.rows())},
        {"eta_fp_convergence_rate", format_g17(diag.fp_convergence_rate())},
        {"eta_fp_mean_iterations", format_g17(diag.fp_mean_iterations())},
        {"degenerate_tau_draws", std::to_string(diag.degenerate_tau_draws)},
    };
    manifest.emplace_back("config_hash", config_hash(manifest));
    write_manifest((dir / "manifest.txt").string(), manifest);
}

// simulate: Tables 1-4 style metrics plus the per-replication eta medians
inline void simulate_command(const RunConfig& rc) {
    const auto dir = detail::ensure_out_dir(rc);
    const auto methods = detail::parse_methods(rc.methods);
    const SimStudyResult res = run_simulation_study({rc.model}, rc.n, methods, rc.reps,
                                                    rc.iterations, rc.burn_in, rc.seed, rc.threads);
    std::ofstream out(dir / "metrics.csv");
    out << "method,n,rmse,al,cp,model,replications,failures\n";
    for (const auto& cell : res.cells)
        out << cell.method << ',' << cell.n << ',' << format_g17(cell.rmse) << ','
            << format_g17(cell.al) << ',' << format_g17(cell.cp) << ',' << cell.model << ','
            << cell.replications << ',' << cell.failures << '\n';
    std::ofstream eta_out(dir / "eta_medians.csv");
    eta_out << "model,replication,eta_median\n";
    for (const auto& [model, medians] : res.hbl_eta_medians)
        for (std::size_t r = 0; r < medians.size(); ++r)
            eta_out << model << ',' << r << ',' << format_g17(medians[r]) << '\n';
}

// validate-approx: max divergence between the true eta conditional and its
// gamma approximation over replicated GIG(1,1,1) datasets
inline void validate_approx_command(const RunConfig& rc) {
    const auto dir = detail::ensure_out_dir(rc);
    const auto ns = detail::parse_int_list(rc.n_grid);
    const auto abs = detail::parse_double_list(rc.ab_grid);
    std::ofstream out(dir / "approx_quality.csv");
    out << "n,ab,max_tv,max_kl,max_revkl,min_weight_ess_fraction\n";
    for (int n : ns) {
        for (double ab : abs) {
            double max_tv = 0.0, max_kl = 0.0, max_rev = 0.0, min_ess = 1.0;
            parallel_for(rc.datasets, [&, n, ab](int t) {
                RngStream rng(rc.seed, 7919ULL * t + 13ULL * n);
                Eigen::VectorXd x(n);
                for (int i = 0; i < n; ++i) x[i] = sample_gig(GigParams(1.0, 1.0, 1.0), rng);
                const auto tv = discrepancy(x, ab, ab, Divergence::TV, rc.mc_size, rng);
                const auto kl = discrepancy(x, ab, ab, Divergence::KL, rc.mc_size, rng);
                const auto rev = discrepancy(x, ab, ab, Divergence::RevKL, rc.mc_size, rng);
                static std::mutex mu;
                std::lock_guard<std::mutex> lock(mu);
                max_tv = std::max(max_tv, tv.value);
                max_kl = std::max(max_kl, kl.value);
                max_rev = std::max(max_rev, rev.value);
                min_ess = std::min({min_ess, tv.weight_ess_fraction});
            }, rc.threads);
            out << n << ',' << format_g17(ab) << ',' << format_g17(max_tv) << ','
                << format_g17(max_kl) << ',' << format_g17(max_rev) << ','
                << format_g17(min_ess) << '\n';
        }
    }
}

// cv: leave-one-out prediction errors per method
inline void cv_command(const RunConfig& rc) {
    const auto dir = detail::ensure_out_dir(rc);
    const Dataset raw = load_csv(rc.data_path, rc.response);
    const auto methods = detail::parse_methods(rc.methods);
    const Eigen::Index n = raw.n();

    std::ofstream out(dir / "cv_metrics.csv");
    out << "method,mspe,mape,mhpe,medspe\n";
    for (auto kind : methods) {
        Eigen::VectorXd predictions(n);
        parallel_for(static_cast<int>(n), [&](int i) {
            Dataset fold;
            fold.y.resize(n - 1);
            fold.x.resize(n - 1, raw.p());
            Eigen::Index r = 0;
            for (Eigen::Index k = 0; k < n; ++k) {
                if (k == i) continue;
                fold.y[r] = raw.y[k];
                fold.x.row(r) = raw.x.row(k);
                ++r;
            }
            const Dataset fitted = rc.do_standardize ? standardize(fold) : center(fold);
            FitConfig cfg = detail::make_fit_config(rc);
            cfg.kind = kind;
            cfg.stream = static_cast<std::uint64_t>(i + 1);
            const PosteriorSamples samples = run_chain(fitted, cfg);
            const Eigen::MatrixXd coefs = original_scale_coefficients(samples, fitted);
            Eigen::VectorXd med(coefs.cols());
            for (Eigen::Index j = 0; j < coefs.cols(); ++j) med[j] = quantile(coefs.col(j), 0.5);
            predictions[i] = predict_original(med, raw.x.row(i).transpose());
        }, rc.threads);
        const LoocvMetrics m = loocv_metrics(raw.y, predictions);
        out << sampler_name(kind) << ',' << format_g17(m.mspe) << ',' << format_g17(m.mape) << ','
            << format_g17(m.mhpe) << ',' << format_g17(m.medspe) << '\n';
    }
}

// influence: IF grid as CSV for external plotting
inline void influence_command(const RunConfig& rc) {
    const auto dir = detail::ensure_out_dir(rc);
    const auto etas = detail::parse_double_list(rc.eta_list);
    const auto rows = influence_grid(etas, {-0.5, 1.0}, 81, 10.0, 100,
                                     rc.posterior_draws, rc.g_draws, rc.seed);
    std::ofstream out(dir / "influence.csv");
    out << "x,z,eta,if0,if1\n";
    for (const auto& r : rows)
        out << format_g17(r.x) << ',' << format_g17(r.z) << ',' << format_g17(r.eta) << ','
            << format_g17(r.if0) << ',' << format_g17(r.if1) << '\n';
}

// demo-multimodal: smoothed (b1, b2) density grids and mode counts for the
// unconditional and conditional priors on the same data
inline void demo_multimodal_command(const RunConfig& rc) {
    const auto dir = detail::ensure_out_dir(rc);
    const MultimodalDemoResult res =
        run_multimodality_demo(rc.demo_n, rc.iterations, rc.burn_in, rc.seed, rc.chains);
    auto dump_density = [&](const std::string& name, const ModeCount& mc) {
        std::ofstream out(dir / name);
        out << "x_lo,x_hi,y_lo,y_hi,modes\n";
        out << format_g17(mc.x_lo) << ',' << format_g17(mc.x_hi) << ',' << format_g17(mc.y_lo)
            << ',' << format_g17(mc.y_hi) << ',' << mc.modes << '\n';
        for (Eigen::Index i = 0; i < mc.density.rows(); ++i) {
            for (Eigen::Index j = 0; j < mc.density.cols(); ++j) {
                if (j) out << ',';
                out << format_g17(mc.density(i, j));
            }
            out << '\n';
        }
    };
    dump_density("density_unconditional.csv", res.unconditional_modes);
    dump_density("density_conditional.csv", res.conditional_modes);
    write_samples_csv((dir / "draws_unconditional.csv").string(), res.unconditional);
    write_samples_csv((dir / "draws_conditional.csv").string(), res.conditional);
    std::ofstream summary(dir / "modes.csv");
    summary << "prior,modes\n";
    summary << "unconditional," << res.unconditional_modes.modes << '\n';
    summary << "conditional," << res.conditional_modes.modes << '\n';
}

// timing: per-method wall clock across the dimension grid, plus the
// within-2x check of HBL against the other robust samplers
inline void timing_command(const RunConfig& rc) {
    const auto dir = detail::ensure_out_dir(rc);
    const auto ps = detail::parse_int_list(rc.p_grid);
    const auto methods = detail::parse_methods(rc.methods);
    const auto rows = run_timing(ps, methods, rc.iterations, rc.burn_in, rc.runs, rc.seed);
    std::ofstream out(dir / "timing.csv");
    out << "method,p,seconds\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.p << ',' << format_g17(r.seconds) << '\n';
    const bool ok = hbl_within_factor(rows, 2.0);
    std::ofstream summary(dir / "timing_summary.txt");
    summary << "hbl_within_2x_of_other_robust_samplers=" << (ok ? 1 : 0) << '\n';
    if (!ok) std::cerr << "warning: HBL exceeded 2x of another robust sampler's time\n";
}

} // namespace hblasso

#endif
