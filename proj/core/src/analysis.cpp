#include "dcma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dcma/errors.hpp"
#include "dcma/parallel.hpp"

namespace dcma {

namespace {

// Regularized incomplete gamma by series (x < a+1) or continued fraction.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Acklam's rational approximation of the standard normal quantile.
double probit(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p <= 0.0 || p >= 1.0) throw domain_error("probit: p must be in (0,1)");
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) return -probit(1.0 - p);
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw domain_error("gamma_p: invalid arguments");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double chi2_sf(double x, int k) {
    if (k <= 0) throw domain_error("chi2_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    return 1.0 - gamma_p(static_cast<double>(k) / 2.0, x / 2.0);
}

MaiSampleSet collect_mai_samples(const SystemParams& params, const CodeSet& codes,
                                 const ChannelEnsembleParams& ens,
                                 const MaiSamplingProtocol& protocol) {
    if (protocol.trials < 1) throw config_error("collect_mai_samples: trials must be >= 1");
    const FrequencyGrid grid = make_grid(params);
    const PhaserBank bank(params, codes, grid);
    const double t_b = params.bit_period();
    const double window = params.window_s();
    const double bits_exact = window / t_b;
    const auto n_bits = static_cast<std::size_t>(std::llround(bits_exact));
    if (std::abs(bits_exact - static_cast<double>(n_bits)) > 1e-9 || n_bits < 2)
        throw config_error("collect_mai_samples: window must be an integer number (>= 2) of bit periods");

    const auto window_len = static_cast<std::size_t>(std::llround(2.0 * t_b * params.fs));
    const int n = codes.size();
    std::vector<BitStream> all_ones(static_cast<std::size_t>(n),
                                    BitStream(std::vector<int>(n_bits, 1), params));
    LinkOptions opts;
    opts.periodic = true;
    opts.worst_case_interferers = true;

    SystemParams quiet = params;
    quiet.noise_sigma = 0.0;   // MAI statistics are noiseless by protocol

    // Per-trial buffers, merged sequentially, so results are identical no
    // matter how trials are scheduled across workers.
    std::vector<std::vector<double>> trial_samples(static_cast<std::size_t>(protocol.trials));
    std::vector<std::vector<double>> trial_sigma(static_cast<std::size_t>(protocol.trials));
    parallel_for(static_cast<std::size_t>(protocol.trials), [&](std::size_t trial) {
        StreamRng rng(protocol.seed, trial);
        const ChannelRealization chan = draw_realization(quiet, ens, rng);
        auto& samples = trial_samples[trial];
        auto& sigmas = trial_sigma[trial];
        for (int i = 0; i < n; ++i) {
            const DecodedLink link =
                simulate_link(quiet, codes, chan, all_ones, i, nullptr, opts, &bank);
            double sum = 0.0, sum2 = 0.0;
            for (std::size_t s = 0; s < window_len; ++s) {
                const double v = link.x_mai.samples[s].real();
                sum += v;
                sum2 += v * v;
                if (s % protocol.stride == 0) samples.push_back(v);
            }
            const double mean = sum / static_cast<double>(window_len);
            sigmas.push_back(sum2 / static_cast<double>(window_len) - mean * mean);
        }
    });

    MaiSampleSet out;
    for (int trial = 0; trial < protocol.trials; ++trial) {
        const auto t = static_cast<std::size_t>(trial);
        out.samples.insert(out.samples.end(), trial_samples[t].begin(), trial_samples[t].end());
        out.per_realization_sigma_sq.insert(out.per_realization_sigma_sq.end(),
                                            trial_sigma[t].begin(), trial_sigma[t].end());
    }
    return out;
}

MaiStats mai_stats(const std::vector<double>& samples, int bins) {
    if (samples.empty()) throw domain_error("mai_stats: empty input");
    if (bins < 1) throw domain_error("mai_stats: bins must be >= 1");

    MaiStats st;
    st.n_samples = samples.size();
    double sum = 0.0;
    for (double v : samples) sum += v;
    st.mu_hat = sum / static_cast<double>(samples.size());
    double acc = 0.0;
    for (double v : samples) acc += (v - st.mu_hat) * (v - st.mu_hat);
    st.sigma_sq_hat = acc / static_cast<double>(samples.size());

    const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mn_it, hi = *mx_it;
    if (lo == hi) hi = lo + 1.0;   // degenerate (e.g. all-zero) input
    st.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b)
        st.bin_edges[static_cast<std::size_t>(b)] =
            lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    st.counts.assign(static_cast<std::size_t>(bins), 0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : samples) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= static_cast<std::size_t>(bins)) b = static_cast<std::size_t>(bins) - 1;
        ++st.counts[b];
    }
    return st;
}

double gaussian_pdf(double x, const MaiStats& stats) {
    if (stats.sigma_sq_hat <= 0.0) throw domain_error("gaussian_pdf: zero variance");
    const double d = x - stats.mu_hat;
    return std::exp(-d * d / (2.0 * stats.sigma_sq_hat)) /
           std::sqrt(2.0 * std::numbers::pi * stats.sigma_sq_hat);
}

NormalFitResult normal_fit_chi2(const std::vector<double>& samples, int bins,
                                double significance) {
    if (bins < 50) throw domain_error("normal_fit_chi2: need >= 50 bins");
    if (samples.size() < static_cast<std::size_t>(bins) * 5)
        throw domain_error("normal_fit_chi2: too few samples for the bin count");

    double sum = 0.0;
    for (double v : samples) sum += v;
    const double mu = sum / static_cast<double>(samples.size());
    double acc = 0.0;
    for (double v : samples) acc += (v - mu) * (v - mu);
    const double sd = std::sqrt(acc / static_cast<double>(samples.size()));
    if (sd <= 0.0) throw domain_error("normal_fit_chi2: zero variance");

    // Equal-probability cells under the fitted normal.
    std::vector<double> edges(static_cast<std::size_t>(bins) - 1);
    for (int b = 1; b < bins; ++b)
        edges[static_cast<std::size_t>(b) - 1] =
            mu + sd * probit(static_cast<double>(b) / static_cast<double>(bins));

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : samples) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), v);
        ++counts[static_cast<std::size_t>(it - edges.begin())];
    }

    const double expected = static_cast<double>(samples.size()) / static_cast<double>(bins);
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }

    NormalFitResult r;
    r.statistic = stat;
    r.dof = bins - 3;   // two fitted parameters
    r.p_value = chi2_sf(stat, r.dof);
    r.significance = significance;
    r.passed = r.p_value >= significance;
    return r;
}

double sir_statistical(const MaiStats& stats) {
    if (stats.sigma_sq_hat <= 0.0) throw domain_error("sir_statistical: zero variance");
    return 1.0 / stats.sigma_sq_hat;
}

double sir_analytic(const SystemParams& params, int n_users, double alpha_mean_sq) {
    if (n_users < 2) throw domain_error("sir_analytic: need n_users >= 2");
    if (alpha_mean_sq <= 0.0) throw domain_error("sir_analytic: alpha_mean_sq must be positive");
    return 4.0 * params.delta_tau * params.delta_f /
           (alpha_mean_sq * static_cast<double>(n_users - 1));
}

double sinr(double sir, double snr) {
    if (sir <= 0.0) throw domain_error("sinr: sir must be positive");
    if (std::isinf(snr)) return sir;
    if (snr <= 0.0) throw domain_error("sinr: snr must be positive or infinite");
    return 1.0 / (1.0 / sir + 1.0 / snr);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

BepResult bep(const std::vector<double>& sinr_per_receiver) {
    if (sinr_per_receiver.empty()) throw domain_error("bep: no receivers");
    BepResult r;
    r.sinr_i = sinr_per_receiver;
    r.per_receiver.reserve(sinr_per_receiver.size());
    double sum = 0.0;
    for (double s : sinr_per_receiver) {
        if (s <= 0.0) throw domain_error("bep: SINR must be positive");
        const double b = q_function(std::sqrt(s) / 2.0);
        r.per_receiver.push_back(b);
        sum += b;
    }
    r.average = sum / static_cast<double>(sinr_per_receiver.size());
    return r;
}

BepResult bep_from_sir(const std::vector<double>& sir_per_receiver, double snr) {
    std::vector<double> sinrs;
    sinrs.reserve(sir_per_receiver.size());
    for (double s : sir_per_receiver) sinrs.push_back(sinr(s, snr));
    BepResult r = bep(sinrs);
    r.sir_i = sir_per_receiver;
    r.snr = snr;
    return r;
}

MonteCarloBep bep_monte_carlo(const SystemParams& params, const CodeSet& codes,
                              const ChannelEnsembleParams& ens,
                              const BepMonteCarloOptions& opts) {
    if (opts.trials < 1) throw config_error("bep_monte_carlo: trials must be >= 1");
    const FrequencyGrid grid = make_grid(params);
    const PhaserBank bank(params, codes, grid);
    const double t_b = params.bit_period();
    const double window = params.window_s();
    const double bits_exact = window / t_b;
    const auto n_bits = static_cast<std::size_t>(std::llround(bits_exact));
    if (std::abs(bits_exact - static_cast<double>(n_bits)) > 1e-9 || n_bits < 2)
        throw config_error("bep_monte_carlo: window must be an integer number (>= 2) of bit periods");

    LinkOptions lopt;
    lopt.periodic = true;
    lopt.worst_case_interferers = opts.worst_case_interferers;

    const int n = codes.size();
    std::vector<std::uint64_t> trial_errors(static_cast<std::size_t>(opts.trials), 0);
    parallel_for(static_cast<std::size_t>(opts.trials), [&](std::size_t trial) {
        StreamRng rng(opts.seed, trial);
        const ChannelRealization chan = draw_realization(params, ens, rng);
        // Each user's train carries one decision bit in slot 0.  In worst-case
        // mode interferer trains are replaced with all-ones inside
        // simulate_link; in random mode the remaining slots are equiprobable.
        std::vector<int> desired_bits(static_cast<std::size_t>(n), 0);
        std::vector<BitStream> trains;
        trains.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            std::vector<int> pattern(n_bits, 0);
            if (!opts.worst_case_interferers)
                for (auto& b : pattern) b = rng.uniform() < 0.5 ? 0 : 1;
            desired_bits[static_cast<std::size_t>(k)] = rng.uniform() < 0.5 ? 0 : 1;
            pattern[0] = desired_bits[static_cast<std::size_t>(k)];
            trains.emplace_back(std::move(pattern), params);
        }
        for (int i = 0; i < n; ++i) {
            const DecodedLink link = simulate_link(params, codes, chan, trains, i,
                                                   params.noise_sigma > 0.0 ? &rng : nullptr,
                                                   lopt, &bank);
            const double t_star =
                std::fmod(chan.tx_offset(i) + chan.delay(i, i) + 2.0 * params.tau0, window);
            const auto detected = detect_bits(link, opts.threshold, {t_star});
            if (detected[0] != desired_bits[static_cast<std::size_t>(i)]) ++trial_errors[trial];
        }
    });

    std::uint64_t errors = 0;
    for (auto e : trial_errors) errors += e;
    const std::uint64_t bits_total =
        static_cast<std::uint64_t>(opts.trials) * static_cast<std::uint64_t>(n);

    MonteCarloBep out;
    out.errors = errors;
    out.bits = bits_total;
    out.bep = static_cast<double>(errors) / static_cast<double>(bits_total);

    // Wilson 95% interval
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(bits_total);
    const double p = out.bep;
    const double denom = 1.0 + z * z / nn;
    const double center = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    out.wilson_lo = std::max(0.0, center - half);
    out.wilson_hi = std::min(1.0, center + half);
    out.reliable = errors >= 10 && (out.wilson_hi - out.wilson_lo) <= p;

    if (opts.require_resolution && (!out.reliable || p < 1e-7))
        throw numerical_error("bep_monte_carlo: insufficient trials for the requested resolution");
    return out;
}

double spectral_efficiency(int n_users, const SystemParams& params) {
    if (n_users < 1) throw domain_error("spectral_efficiency: n_users must be >= 1");
    return static_cast<double>(n_users) / (2.0 * params.delta_tau * params.delta_f);
}

std::vector<double> shuffled_subsample(const std::vector<double>& pool, std::size_t n,
                                       StreamRng& rng) {
    if (n > pool.size()) throw domain_error("shuffled_subsample: n exceeds pool size");
    std::vector<double> v = pool;
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.uniform_index(i)]);
    v.resize(n);
    return v;
}

} // namespace dcma
