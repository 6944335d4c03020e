#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "dcma/channel.hpp"
#include "dcma/coding.hpp"
#include "dcma/link.hpp"
#include "dcma/sysconfig.hpp"

namespace dcma {

// Sample statistics of the normalized MAI plus its histogram.
// sigma_sq_hat is the interference-to-signal power ratio.
struct MaiStats {
    double mu_hat = 0.0;
    double sigma_sq_hat = 0.0;
    std::vector<double> bin_edges;   // size bins + 1
    std::vector<std::uint64_t> counts;
    std::size_t n_samples = 0;
};

// Pearson chi-square normality fit on equal-probability bins.
struct NormalFitResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
    bool passed = false;       // p_value >= significance
    double significance = 0.01;
};

struct BepResult {
    std::vector<double> per_receiver;   // BEP_i
    double average = 0.0;
    std::vector<double> sir_i;
    std::vector<double> sinr_i;
    double snr = std::numeric_limits<double>::infinity();
};

struct MonteCarloBep {
    double bep = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    bool reliable = false;   // enough errors for the interval to be narrower than the estimate
};

// Worst-case MAI sampling protocol: per trial draw a channel realization,
// force all interferer bits to 1, collect normalized real-part samples over a
// 2 T_b window, pool across trials and receivers.
struct MaiSamplingProtocol {
    int trials = 100;
    std::size_t stride = 1;    // decimation of the sample window
    std::uint64_t seed = 0;
};

struct MaiSampleSet {
    std::vector<double> samples;                  // pooled normalized real MAI
    std::vector<double> per_realization_sigma_sq; // one per (trial, receiver)
};

MaiSampleSet collect_mai_samples(const SystemParams& params, const CodeSet& codes,
                                 const ChannelEnsembleParams& ens,
                                 const MaiSamplingProtocol& protocol);

// Mean, variance and histogram of already-normalized MAI samples.
MaiStats mai_stats(const std::vector<double>& samples, int bins);

// Normal density with the fitted (mu_hat, sigma_sq_hat).
double gaussian_pdf(double x, const MaiStats& stats);

// Pearson chi-square against the fitted normal, >= 50 equal-probability bins.
NormalFitResult normal_fit_chi2(const std::vector<double>& samples, int bins = 50,
                                double significance = 0.01);

// SIR = 1 / sigma_sq_hat.
double sir_statistical(const MaiStats& stats);

// SIR = 4 delta_tau delta_f / (alpha_mean_sq (N - 1)).
double sir_analytic(const SystemParams& params, int n_users, double alpha_mean_sq);

// Harmonic combination 1 / (1/sir + 1/snr); returns sir for infinite snr.
double sinr(double sir, double snr);

// Gaussian upper-tail probability.
double q_function(double x);

// BEP_i = Q(sqrt(SINR_i) / 2) and the receiver average.
BepResult bep(const std::vector<double>& sinr_per_receiver);

// Convenience: per-receiver SIRs + common SNR -> SINRs -> BEP.
BepResult bep_from_sir(const std::vector<double>& sir_per_receiver, double snr);

// End-to-end empirical BEP: per trial one decision bit per receiver through
// simulate_link + detect_bits at threshold 0.5.  Throws numerical_error when
// require_resolution is set and the Wilson interval is wider than the
// estimate (or the estimate is below 1e-7).
struct BepMonteCarloOptions {
    int trials = 1000;
    std::uint64_t seed = 0;
    bool worst_case_interferers = true;
    double threshold = 0.5;
    bool require_resolution = false;
};

MonteCarloBep bep_monte_carlo(const SystemParams& params, const CodeSet& codes,
                              const ChannelEnsembleParams& ens,
                              const BepMonteCarloOptions& opts);

// eta = N / (2 delta_tau delta_f), b/s/Hz.
double spectral_efficiency(int n_users, const SystemParams& params);

// Regularized lower incomplete gamma P(a, x); exposed for the chi-square
// machinery and its tests.
double gamma_p(double a, double x);

// chi-square survival function (p-value of a statistic at k dof).
double chi2_sf(double x, int k);

// Deterministic Fisher-Yates subsample of n elements.
std::vector<double> shuffled_subsample(const std::vector<double>& pool, std::size_t n,
                                       StreamRng& rng);

} // namespace dcma
