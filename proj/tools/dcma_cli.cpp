// Experiment runner: each subcommand regenerates one family of simulation
// outputs (CSV + JSON + manifest) from a JSON config file.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dcma/errors.hpp"
#include "dcma/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int trials = -1;
    bool gnuplot = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON experiment config")->required();
    cmd->add_option("--out", args.out_dir, "output directory (default: config value, then $DCMA_OUT_DIR)");
    cmd->add_option("--seed", args.seed, "override RNG seed");
    cmd->add_option("--trials", args.trials, "override Monte Carlo trial count");
    cmd->add_flag("--gnuplot", args.gnuplot, "also emit a gnuplot script");
}

dcma::ExperimentConfig load(const CommonArgs& args, const std::string& name) {
    auto cfg = dcma::ExperimentConfig::from_json_file(args.config_path);
    cfg.experiment = name;
    if (!args.out_dir.empty()) {
        cfg.out_dir = args.out_dir;
    } else if (cfg.out_dir == ".") {
        if (const char* env = std::getenv("DCMA_OUT_DIR")) cfg.out_dir = env;
    }
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    if (args.trials > 0) cfg.trials = args.trials;
    if (args.gnuplot) cfg.gnuplot = true;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dcma: dispersion code multiple access simulator"};
    app.require_subcommand(1);
    app.footer("System defaults: tau0 = delta_tau when omitted; n_fft = smallest power of two\n"
               "with a window of at least four bit periods (two full bit periods of MAI spread\n"
               "plus the same margin).  Exit codes: 0 ok, 2 config error, 3 numerical failure.");

    CommonArgs args;
    auto* wave = app.add_subcommand("waveforms", "cascaded delays and decoded envelopes (synchronized, shorted channels)");
    auto* mai = app.add_subcommand("mai-dist", "MAI histogram, variance and normal fit");
    auto* bepn = app.add_subcommand("bep-vs-n", "BEP against user count, statistical and closed form");
    auto* beps = app.add_subcommand("bep-vs-snr", "analytic BEP against SNR for several system sizes");
    auto* demo = app.add_subcommand("demo-2x2", "two-user DOOK demo with first-order codes");
    for (auto* cmd : {wave, mai, bepn, beps, demo}) add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (wave->parsed()) {
            auto s = dcma::run_waveforms(load(args, "waveforms"));
            std::cout << "waveforms: mean pair peak " << s.mean_pair_peak << ", max "
                      << s.max_pair_peak << '\n';
        } else if (mai->parsed()) {
            auto s = dcma::run_mai_dist(load(args, "mai-dist"));
            std::cout << "mai-dist: sigma_sq_hat " << s.stats.sigma_sq_hat << ", SIR "
                      << s.sir_statistical << ", normal fit "
                      << (s.fit.passed ? "passed" : "FAILED")
                      << (s.gaussian_flag ? "" : " (gaussian approximation flagged)") << '\n';
        } else if (bepn->parsed()) {
            auto s = dcma::run_bep_vs_n(load(args, "bep-vs-n"));
            std::cout << "bep-vs-n: " << s.rows.size() << " rows\n";
        } else if (beps->parsed()) {
            auto s = dcma::run_bep_vs_snr(load(args, "bep-vs-snr"));
            std::cout << "bep-vs-snr: " << s.snr_db.size() << " SNR points x " << s.n_list.size()
                      << " curves\n";
        } else if (demo->parsed()) {
            auto s = dcma::run_demo_2x2(load(args, "demo-2x2"));
            std::cout << "demo-2x2: SIR " << s.sir_design << ", peak/MAI-PEP "
                      << s.peak_to_mai_pep << '\n';
        }
    } catch (const dcma::window_overflow_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const dcma::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const dcma::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
