// hbl: robust sparse Bayesian regression via the Huberized lasso.
// Subcommands: fit, simulate, validate-approx, cv, influence,
// demo-multimodal, timing. Flags override config-file keys, which override
// the built-in defaults.

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "hblasso/commands.hpp"
#include "hblasso/hblasso.hpp"

int main(int argc, char** argv) {
    using hblasso::RunConfig;
    CLI::App app{"Bayesian Huberized lasso regression"};
    app.require_subcommand(1);

    RunConfig rc;

    // the config file loads first so that explicit flags override its keys
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
    }
    if (!config_path.empty()) {
        try {
            hblasso::load_config_file(rc, config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    std::string config_sink;

    auto add_chain_opts = [&](CLI::App* cmd, bool with_method) {
        cmd->add_option("--iters", rc.iterations, "total Gibbs iterations");
        cmd->add_option("--burn-in", rc.burn_in, "burn-in iterations to discard");
        cmd->add_option("--thin", rc.thin, "thinning interval");
        cmd->add_option("--seed", rc.seed, "64-bit RNG seed");
        cmd->add_option("--a", rc.a, "gamma prior shape for lambda^2");
        cmd->add_option("--b", rc.b, "gamma prior rate for lambda^2");
        cmd->add_option("--c", rc.c, "gamma prior shape for eta");
        cmd->add_option("--d", rc.d, "gamma prior rate for eta");
        cmd->add_option("--eta", rc.eta, "'learn' or a fixed positive value");
        cmd->add_option("--lambda", rc.lambda, "'learn' or a fixed positive value");
        cmd->add_option("--out", rc.out_dir, "output directory");
        cmd->add_option("--threads", rc.threads, "worker threads (0 = hardware)");
        cmd->add_option("--config", config_sink, "key=value file applied before flags");
        if (with_method)
            cmd->add_option("--method", rc.method, "hbl, bl, mbl or tbl");
    };

    auto* fit = app.add_subcommand("fit", "fit one model to a CSV dataset");
    fit->add_option("--data", rc.data_path, "input CSV with a header row")->required();
    fit->add_option("--response", rc.response, "name of the response column");
    add_chain_opts(fit, true);
    fit->add_flag("!--no-standardize", rc.do_standardize,
                  "fit on centered rather than standardized data");
    fit->add_flag("--store-latent", rc.store_latent, "also store tau2 / sigma2 draws");

    auto* sim = app.add_subcommand("simulate", "run a simulation scenario");
    sim->add_option("--model", rc.model, "scenario 1-4")->required();
    sim->add_option("--n", rc.n, "sample size per replication");
    sim->add_option("--reps", rc.reps, "number of replications");
    sim->add_option("--methods", rc.methods, "comma list of methods");
    add_chain_opts(sim, false);

    auto* va = app.add_subcommand("validate-approx",
                                  "divergence of the gamma approximation to the eta conditional");
    va->add_option("--n-grid", rc.n_grid, "comma list of dataset sizes");
    va->add_option("--ab-grid", rc.ab_grid, "comma list of a=b prior settings");
    va->add_option("--datasets", rc.datasets, "datasets per cell");
    va->add_option("--mc", rc.mc_size, "importance-sampling draws");
    va->add_option("--seed", rc.seed, "64-bit RNG seed");
    va->add_option("--out", rc.out_dir, "output directory");
    va->add_option("--threads", rc.threads, "worker threads");
    va->add_option("--config", config_sink, "key=value file applied before flags");

    auto* cv = app.add_subcommand("cv", "leave-one-out cross-validated prediction error");
    cv->add_option("--data", rc.data_path, "input CSV with a header row")->required();
    cv->add_option("--response", rc.response, "name of the response column");
    cv->add_option("--methods", rc.methods, "comma list of methods");
    add_chain_opts(cv, false);
    cv->add_flag("!--no-standardize", rc.do_standardize,
                 "fit folds on centered rather than standardized data");

    auto* infl = app.add_subcommand("influence", "influence functions of the posterior means");
    infl->add_option("--eta-list", rc.eta_list, "comma list of eta settings");
    infl->add_option("--posterior-draws", rc.posterior_draws, "posterior sample size");
    infl->add_option("--g-draws", rc.g_draws, "Monte Carlo draws for the centering integral");
    infl->add_option("--seed", rc.seed, "64-bit RNG seed");
    infl->add_option("--out", rc.out_dir, "output directory");
    infl->add_option("--config", config_sink, "key=value file applied before flags");

    auto* demo = app.add_subcommand("demo-multimodal",
                                    "unconditional vs conditional prior mode structure");
    demo->add_option("--n", rc.demo_n, "observations in the demo design");
    demo->add_option("--chains", rc.chains, "pooled chains from dispersed starts");
    add_chain_opts(demo, false);

    auto* tim = app.add_subcommand("timing", "wall-clock comparison across methods");
    tim->add_option("--p-grid", rc.p_grid, "comma list of dimensions");
    tim->add_option("--runs", rc.runs, "runs to average");
    tim->add_option("--methods", rc.methods, "comma list of methods");
    add_chain_opts(tim, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) hblasso::fit_command(rc);
        else if (sim->parsed()) hblasso::simulate_command(rc);
        else if (va->parsed()) hblasso::validate_approx_command(rc);
        else if (cv->parsed()) hblasso::cv_command(rc);
        else if (infl->parsed()) hblasso::influence_command(rc);
        else if (demo->parsed()) hblasso::demo_multimodal_command(rc);
        else if (tim->parsed()) hblasso::timing_command(rc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
