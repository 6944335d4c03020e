#include "dcma/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dcma/errors.hpp"
#include "dcma/link.hpp"

namespace dcma {

namespace fs = std::filesystem;

namespace {

nlohmann::json parse(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string(what) + ": " + e.what());
    }
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw config_error("cannot open output file " + p.string());
    return os;
}

void write_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["experiment"] = cfg.experiment;
    j["library_version"] = kLibraryVersion;
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["system"] = nlohmann::json::parse(params_to_json(cfg.system));
    if (cfg.codes)
        j["codes"] = *cfg.codes;
    else
        j["codes"] = "all-odd";
    j["ensemble"] = {{"d_min", cfg.ensemble.d_min_m},
                     {"d_max", cfg.ensemble.d_max_m},
                     {"alpha_min_sq", cfg.ensemble.alpha_min_sq},
                     {"alpha_max_sq", cfg.ensemble.alpha_max_sq}};
    j["outputs"] = outputs;
    auto os = open_out(fs::path(cfg.out_dir) / "manifest.json");
    os << j.dump(2) << '\n';
}

void maybe_gnuplot(const ExperimentConfig& cfg, const std::string& script) {
    if (!cfg.gnuplot) return;
    auto os = open_out(fs::path(cfg.out_dir) / "plot.gp");
    os << script;
}

// Single-Dirac-per-user decode in the synchronized, shorted-channel scenario.
DecodedLink shorted_decode(const SystemParams& params, const CodeSet& codes, int rx,
                           const PhaserBank& bank) {
    std::vector<int> one_bit{1};
    std::vector<BitStream> trains(static_cast<std::size_t>(codes.size()),
                                  BitStream(one_bit, params));
    return simulate_link(params, codes, ChannelRealization::identity(codes.size()), trains, rx,
                         nullptr, {}, &bank);
}

} // namespace

CodeSet ExperimentConfig::resolve_codes() const { return resolve_codes(system.n_users); }

CodeSet ExperimentConfig::resolve_codes(int n_users) const {
    if (codes) {
        if (static_cast<int>(codes->size()) != n_users)
            throw config_error("config: codes length disagrees with n_users");
        return CodeSet(*codes);
    }
    return all_odd_code_set(n_users);
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return from_json_text(buf.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j = parse(text, "config");
    ExperimentConfig cfg;
    try {
        cfg.experiment = j.value("experiment", "");
        cfg.system = params_from_json(j.at("system").dump());
        if (j.contains("codes")) cfg.codes = j.at("codes").get<std::vector<int>>();
        if (j.contains("ensemble")) {
            const auto& e = j.at("ensemble");
            cfg.ensemble.d_min_m = e.value("d_min", cfg.ensemble.d_min_m);
            cfg.ensemble.d_max_m = e.value("d_max", cfg.ensemble.d_max_m);
            cfg.ensemble.alpha_min_sq = e.value("alpha_min_sq", cfg.ensemble.alpha_min_sq);
            cfg.ensemble.alpha_max_sq = e.value("alpha_max_sq", cfg.ensemble.alpha_max_sq);
        }
        cfg.trials = j.value("trials", cfg.trials);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.out_dir = j.value("out", cfg.out_dir);
        cfg.fit_samples = j.value("fit_samples", cfg.fit_samples);
        cfg.fit_stride = j.value("fit_stride", cfg.fit_stride);
        cfg.histogram_bins = j.value("histogram_bins", cfg.histogram_bins);
        cfg.n_min = j.value("n_min", cfg.n_min);
        cfg.n_max = j.value("n_max", cfg.n_max);
        if (j.contains("snr_n_list")) cfg.snr_n_list = j.at("snr_n_list").get<std::vector<int>>();
        cfg.snr_db_min = j.value("snr_db_min", cfg.snr_db_min);
        cfg.snr_db_max = j.value("snr_db_max", cfg.snr_db_max);
        cfg.snr_db_step = j.value("snr_db_step", cfg.snr_db_step);
        cfg.demo_bit_rate = j.value("demo_bit_rate", cfg.demo_bit_rate);
        cfg.demo_xor_delay = j.value("demo_xor_delay", cfg.demo_xor_delay);
        if (j.contains("demo_data")) cfg.demo_data = j.at("demo_data").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    return cfg;
}

WaveformsSummary run_waveforms(const ExperimentConfig& cfg) {
    const SystemParams& p = cfg.system;
    const CodeSet codes = cfg.resolve_codes();
    const FrequencyGrid grid = make_grid(p);
    const PhaserBank bank(p, codes, grid);
    fs::create_directories(cfg.out_dir);

    WaveformsSummary sum;
    const int n = codes.size();

    // cascaded group delay profiles over the band
    {
        auto os = open_out(fs::path(cfg.out_dir) / "cascaded_delays.csv");
        os << "rx,tx,freq_hz,delay_s\n";
        constexpr int kPoints = 401;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int s = 0; s < kPoints; ++s) {
                    const double f = p.band_lo_hz() +
                                     (p.band_hi_hz() - p.band_lo_hz()) * s / (kPoints - 1);
                    os << i << ',' << k << ',' << f << ','
                       << cascaded_group_delay(codes.code(i), codes.code(k), p, f) << '\n';
                }
        sum.outputs.push_back("cascaded_delays.csv");
    }

    // per-pair normalized impulse responses
    double peak_acc = 0.0;
    int pair_count = 0;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            if (i == k) continue;
            const Waveform h = normalize(impulse_response(bank.cascade(i, k), p), p);
            double pk = 0.0;
            for (std::size_t s = 0; s < h.size(); ++s) pk = std::max(pk, h.envelope(s));
            sum.max_pair_peak = std::max(sum.max_pair_peak, pk);
            peak_acc += pk;
            ++pair_count;
            std::ostringstream name;
            name << "pair_" << i << '_' << k << ".csv";
            auto os = open_out(fs::path(cfg.out_dir) / name.str());
            dump_csv(os, h);
            sum.outputs.push_back(name.str());
        }
    }
    if (pair_count > 0) sum.mean_pair_peak = peak_acc / pair_count;

    // decoded envelopes in the synchronized shorted scenario
    for (int i = 0; i < n; ++i) {
        const DecodedLink link = shorted_decode(p, codes, i, bank);
        std::ostringstream name;
        name << "decoded_" << i << ".csv";
        auto os = open_out(fs::path(cfg.out_dir) / name.str());
        os << "time_s,z_abs,s_abs,x_abs\n";
        for (std::size_t s = 0; s < link.z.size(); ++s)
            os << link.z.time(s) << ',' << link.z.envelope(s) << ',' << link.s_tilde.envelope(s)
               << ',' << link.x_mai.envelope(s) << '\n';
        sum.outputs.push_back(name.str());
    }

    maybe_gnuplot(cfg, "set datafile separator ','\n"
                       "plot 'decoded_0.csv' using 1:2 with lines title '|z|', \\\n"
                       "     'decoded_0.csv' using 1:4 with lines title '|x|'\n");
    write_manifest(cfg, sum.outputs);
    return sum;
}

MaiDistSummary run_mai_dist(const ExperimentConfig& cfg) {
    const SystemParams& p = cfg.system;
    const CodeSet codes = cfg.resolve_codes();
    fs::create_directories(cfg.out_dir);
    MaiDistSummary sum;

    if (codes.size() < 2) {
        // zero-interferer control: nothing to histogram
        auto os = open_out(fs::path(cfg.out_dir) / "stats.json");
        os << nlohmann::json{{"warning", "no interferers; histogram empty"},
                             {"n_samples", 0}}
                  .dump(2)
           << '\n';
        sum.outputs.push_back("stats.json");
        write_manifest(cfg, sum.outputs);
        return sum;
    }

    MaiSamplingProtocol protocol;
    protocol.trials = cfg.trials;
    protocol.seed = cfg.seed;
    protocol.stride = 1;
    const MaiSampleSet set = collect_mai_samples(p, codes, cfg.ensemble, protocol);
    sum.stats = mai_stats(set.samples, cfg.histogram_bins);
    sum.sir_statistical = sir_statistical(sum.stats);

    // decorrelate before the chi-square fit: decimate, then shuffle across
    // the whole pool
    std::vector<double> thin;
    thin.reserve(set.samples.size() / cfg.fit_stride + 1);
    for (std::size_t s = 0; s < set.samples.size(); s += cfg.fit_stride)
        thin.push_back(set.samples[s]);
    StreamRng shuffle_rng(cfg.seed, 0xfeedu);
    const auto fit_pool =
        shuffled_subsample(thin, std::min(cfg.fit_samples, thin.size()), shuffle_rng);
    sum.fit = normal_fit_chi2(fit_pool);
    sum.gaussian_flag = sum.fit.passed && !codes.contains_unit_order();

    {
        auto os = open_out(fs::path(cfg.out_dir) / "hist.csv");
        os << "bin_lo,bin_hi,count,density,gauss_pdf\n";
        const double total = static_cast<double>(sum.stats.n_samples);
        for (std::size_t b = 0; b < sum.stats.counts.size(); ++b) {
            const double lo = sum.stats.bin_edges[b], hi = sum.stats.bin_edges[b + 1];
            const double density = static_cast<double>(sum.stats.counts[b]) / total / (hi - lo);
            os << lo << ',' << hi << ',' << sum.stats.counts[b] << ',' << density << ','
               << gaussian_pdf((lo + hi) / 2.0, sum.stats) << '\n';
        }
        sum.outputs.push_back("hist.csv");
    }
    {
        auto os = open_out(fs::path(cfg.out_dir) / "stats.json");
        os << nlohmann::json{{"mu_hat", sum.stats.mu_hat},
                             {"sigma_sq_hat", sum.stats.sigma_sq_hat},
                             {"n_samples", sum.stats.n_samples},
                             {"sir_statistical", sum.sir_statistical},
                             {"chi2_statistic", sum.fit.statistic},
                             {"chi2_dof", sum.fit.dof},
                             {"chi2_p_value", sum.fit.p_value},
                             {"normal_fit_passed", sum.fit.passed},
                             {"gaussian_approx_valid", sum.gaussian_flag},
                             {"code_set_has_unit_order", codes.contains_unit_order()}}
                  .dump(2)
           << '\n';
        sum.outputs.push_back("stats.json");
    }

    maybe_gnuplot(cfg, "set datafile separator ','\n"
                       "plot 'hist.csv' using (($1+$2)/2):4 with boxes title 'MAI', \\\n"
                       "     'hist.csv' using (($1+$2)/2):5 with lines title 'normal fit'\n");
    write_manifest(cfg, sum.outputs);
    return sum;
}

BepVsNSummary run_bep_vs_n(const ExperimentConfig& cfg) {
    const SystemParams base = cfg.system;
    fs::create_directories(cfg.out_dir);
    BepVsNSummary sum;
    const double alpha_mean =
        (cfg.ensemble.alpha_min_sq + cfg.ensemble.alpha_max_sq) / 2.0;

    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        SystemParams p = base;
        p.n_users = n;
        const CodeSet codes = cfg.codes ? cfg.resolve_codes(n) : all_odd_code_set(n);

        MaiSamplingProtocol protocol;
        protocol.trials = cfg.trials;
        protocol.seed = cfg.seed + static_cast<std::uint64_t>(n);
        protocol.stride = 64;   // only the per-realization variances matter here
        const MaiSampleSet set = collect_mai_samples(p, codes, cfg.ensemble, protocol);

        double acc = 0.0;
        for (double s2 : set.per_realization_sigma_sq)
            acc += q_function(std::sqrt(1.0 / s2) / 2.0);
        BepVsNRow row;
        row.n_users = n;
        row.bep_eq34 = acc / static_cast<double>(set.per_realization_sigma_sq.size());
        row.bep_eq36 = q_function(std::sqrt(sir_analytic(p, n, alpha_mean)) / 2.0);
        sum.rows.push_back(row);
    }

    auto os = open_out(fs::path(cfg.out_dir) / "bep_vs_n.csv");
    os << "n_users,delta_tau_s,delta_f_hz,bep_eq34,bep_eq36\n";
    for (const auto& r : sum.rows)
        os << r.n_users << ',' << base.delta_tau << ',' << base.delta_f << ',' << r.bep_eq34
           << ',' << r.bep_eq36 << '\n';
    sum.outputs.push_back("bep_vs_n.csv");

    maybe_gnuplot(cfg, "set datafile separator ','\nset logscale y\n"
                       "plot 'bep_vs_n.csv' using 1:4 with linespoints title 'statistical', \\\n"
                       "     'bep_vs_n.csv' using 1:5 with points title 'closed form'\n");
    write_manifest(cfg, sum.outputs);
    return sum;
}

BepVsSnrSummary run_bep_vs_snr(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    BepVsSnrSummary sum;
    sum.n_list = cfg.snr_n_list;
    for (double db = cfg.snr_db_min; db <= cfg.snr_db_max + 1e-12; db += cfg.snr_db_step)
        sum.snr_db.push_back(db);

    for (int n : sum.n_list) {
        const double sir = sir_analytic(cfg.system, n, 1.0);
        std::vector<double> curve;
        curve.reserve(sum.snr_db.size());
        for (double db : sum.snr_db) {
            const double snr = std::pow(10.0, db / 10.0);
            curve.push_back(q_function(std::sqrt(sinr(sir, snr)) / 2.0));
        }
        sum.bep.push_back(std::move(curve));
    }

    auto os = open_out(fs::path(cfg.out_dir) / "bep_vs_snr.csv");
    os << "snr_db,n_users,bep\n";
    for (std::size_t ni = 0; ni < sum.n_list.size(); ++ni)
        for (std::size_t si = 0; si < sum.snr_db.size(); ++si)
            os << sum.snr_db[si] << ',' << sum.n_list[ni] << ',' << sum.bep[ni][si] << '\n';
    sum.outputs.push_back("bep_vs_snr.csv");

    maybe_gnuplot(cfg, "set datafile separator ','\nset logscale y\n"
                       "plot 'bep_vs_snr.csv' using 1:($2==4?$3:1/0) with lines title 'N=4'\n");
    write_manifest(cfg, sum.outputs);
    return sum;
}

Demo2x2Summary run_demo_2x2(const ExperimentConfig& cfg) {
    const SystemParams& p = cfg.system;
    const CodeSet codes = cfg.codes ? cfg.resolve_codes() : CodeSet({1, -1});
    if (codes.size() != 2) throw config_error("demo-2x2: needs exactly two users");
    const FrequencyGrid grid = make_grid(p);
    fs::create_directories(cfg.out_dir);

    Demo2x2Summary sum;
    sum.sir_design = sir_analytic(p, 2, 1.0);

    const double bit_period = 1.0 / cfg.demo_bit_rate;
    StreamRng rng(cfg.seed, 0);

    // per-user DOOK pulse trains from NRZ data
    std::vector<std::vector<double>> pulses(2);
    for (int k = 0; k < 2; ++k) {
        std::vector<int> data = cfg.demo_data;
        if (k == 1)
            for (auto& b : data) b = rng.uniform() < 0.5 ? 0 : 1;
        pulses[static_cast<std::size_t>(k)] = dook_modulate(data, bit_period, cfg.demo_xor_delay);
    }
    const double span = static_cast<double>(cfg.demo_data.size()) * bit_period + 2.0 * p.tau0 +
                        p.delta_tau;
    if (span > p.window_s())
        throw window_overflow_error("demo-2x2: data stream does not fit the FFT window");

    auto pulse_spectrum = [&](const std::vector<double>& instants) {
        Spectrum s;
        s.bin_hz = grid.bin_hz();
        s.values.assign(grid.size(), {0.0, 0.0});
        constexpr double two_pi = 2.0 * 3.14159265358979323846;
        for (std::size_t j = grid.band_lo(); j <= grid.band_hi(); ++j) {
            const double f = grid.frequency(j);
            std::complex<double> acc{0.0, 0.0};
            for (double t : instants) acc += std::polar(1.0, -two_pi * f * t);
            s.values[j] = acc;
        }
        return s;
    };

    std::vector<Spectrum> encoded(2);
    for (int k = 0; k < 2; ++k) {
        const Spectrum src = pulse_spectrum(pulses[static_cast<std::size_t>(k)]);
        encoded[static_cast<std::size_t>(k)] =
            apply(src, transfer(codes.code(k), Side::tx, p, grid));
        const Waveform e = normalize(impulse_response(encoded[static_cast<std::size_t>(k)], p), p);
        std::ostringstream name;
        name << "encoded_" << k << ".csv";
        auto os = open_out(fs::path(cfg.out_dir) / name.str());
        dump_csv(os, e);
        sum.outputs.push_back(name.str());
    }

    for (int i = 0; i < 2; ++i) {
        // received = sum of encoded signals (shorted identical channels)
        Spectrum r = encoded[0];
        for (std::size_t j = 0; j < r.size(); ++j) r.values[j] += encoded[1].values[j];
        const Waveform rw = normalize(impulse_response(r, p), p);

        const Spectrum desired =
            apply(encoded[static_cast<std::size_t>(i)], transfer(codes.code(i), Side::rx, p, grid));
        const Spectrum interf = apply(encoded[static_cast<std::size_t>(1 - i)],
                                      transfer(codes.code(i), Side::rx, p, grid));
        const Waveform s_t = normalize(impulse_response(desired, p), p);
        const Waveform x_t = normalize(impulse_response(interf, p), p);

        double s_peak = 0.0, x_peak = 0.0;
        for (std::size_t s = 0; s < s_t.size(); ++s) {
            s_peak = std::max(s_peak, s_t.envelope(s));
            x_peak = std::max(x_peak, x_t.envelope(s));
        }
        if (i == 0) {
            sum.decoded_peak = s_peak;
            sum.peak_to_mai_pep = (s_peak * s_peak) / (x_peak * x_peak);
        }

        std::ostringstream rec_name, dec_name;
        rec_name << "received_" << i << ".csv";
        dec_name << "decoded_" << i << ".csv";
        {
            auto os = open_out(fs::path(cfg.out_dir) / rec_name.str());
            os << "time_s,intensity\n";
            for (std::size_t s = 0; s < rw.size(); ++s)
                os << rw.time(s) << ',' << rw.envelope(s) * rw.envelope(s) << '\n';
        }
        {
            auto os = open_out(fs::path(cfg.out_dir) / dec_name.str());
            os << "time_s,z_intensity,s_intensity,x_intensity\n";
            for (std::size_t s = 0; s < s_t.size(); ++s) {
                const double zs = std::abs(s_t.samples[s] + x_t.samples[s]);
                os << s_t.time(s) << ',' << zs * zs << ','
                   << s_t.envelope(s) * s_t.envelope(s) << ','
                   << x_t.envelope(s) * x_t.envelope(s) << '\n';
            }
        }
        sum.outputs.push_back(rec_name.str());
        sum.outputs.push_back(dec_name.str());
    }

    {
        auto os = open_out(fs::path(cfg.out_dir) / "metrics.json");
        os << nlohmann::json{{"sir_design", sum.sir_design},
                             {"peak_to_mai_pep", sum.peak_to_mai_pep},
                             {"decoded_peak", sum.decoded_peak}}
                  .dump(2)
           << '\n';
        sum.outputs.push_back("metrics.json");
    }

    maybe_gnuplot(cfg, "set datafile separator ','\n"
                       "plot 'decoded_0.csv' using 1:2 with lines title '|z|^2'\n");
    write_manifest(cfg, sum.outputs);
    return sum;
}

} // namespace dcma
