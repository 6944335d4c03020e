#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcma/analysis.hpp"
#include "dcma/channel.hpp"
#include "dcma/coding.hpp"
#include "dcma/sysconfig.hpp"

namespace dcma {

inline constexpr const char* kLibraryVersion = "dcma 0.1.0";

// One experiment run: system parameters, code assignment, channel ensemble,
// trial budget and output location.  Loaded from a JSON config file; seed,
// trials and output directory can be overridden from the command line.
struct ExperimentConfig {
    std::string experiment;
    SystemParams system;
    std::optional<std::vector<int>> codes;   // explicit orders; all-odd when absent
    ChannelEnsembleParams ensemble;
    int trials = 100;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    bool gnuplot = false;

    // mai-dist
    std::size_t fit_samples = 10000;
    std::size_t fit_stride = 8;
    int histogram_bins = 81;

    // bep-vs-n
    int n_min = 2;
    int n_max = 12;

    // bep-vs-snr
    std::vector<int> snr_n_list = {4, 8, 12};
    double snr_db_min = 0.0;
    double snr_db_max = 30.0;
    double snr_db_step = 0.5;

    // demo-2x2
    double demo_bit_rate = 200e6;
    double demo_xor_delay = 3e-9;
    std::vector<int> demo_data = {1, 0, 1, 1, 0, 0, 1, 0};

    CodeSet resolve_codes() const;
    CodeSet resolve_codes(int n_users) const;

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
};

// Per-run summaries, returned so callers (and tests) get the headline numbers
// without re-parsing the CSV output.
struct WaveformsSummary {
    double max_pair_peak = 0.0;    // max over unmatched (i,k) of peak |h_ik|/2df
    double mean_pair_peak = 0.0;   // mean over unmatched pairs
    std::vector<std::string> outputs;
};

struct MaiDistSummary {
    MaiStats stats;
    NormalFitResult fit;
    bool gaussian_flag = false;   // fit passed and no +-1 order in the set
    double sir_statistical = 0.0;
    std::vector<std::string> outputs;
};

struct BepVsNRow {
    int n_users = 0;
    double bep_eq34 = 0.0;   // statistical route
    double bep_eq36 = 0.0;   // closed form with the ensemble mean intensity
};

struct BepVsNSummary {
    std::vector<BepVsNRow> rows;
    std::vector<std::string> outputs;
};

struct BepVsSnrSummary {
    std::vector<double> snr_db;
    std::vector<int> n_list;
    std::vector<std::vector<double>> bep;   // [n_index][snr_index]
    std::vector<std::string> outputs;
};

struct Demo2x2Summary {
    double sir_design = 0.0;
    double peak_to_mai_pep = 0.0;
    double decoded_peak = 0.0;
    std::vector<std::string> outputs;
};

WaveformsSummary run_waveforms(const ExperimentConfig& cfg);
MaiDistSummary run_mai_dist(const ExperimentConfig& cfg);
BepVsNSummary run_bep_vs_n(const ExperimentConfig& cfg);
BepVsSnrSummary run_bep_vs_snr(const ExperimentConfig& cfg);
Demo2x2Summary run_demo_2x2(const ExperimentConfig& cfg);

} // namespace dcma
