#include "dcma/link.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dcma/errors.hpp"
#include "dcma/fft.hpp"

namespace dcma {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Adds the band-limited train-through-cascade contribution to acc:
//   acc_j += amp * comb_j * e^{-j 2 pi f_j t_shift} * casc_j     (in-band j)
// The comb is evaluated with phase recurrences; no trig in the inner loops.
void accumulate_user(std::vector<std::complex<double>>& acc, const Spectrum& casc,
                     const FrequencyGrid& grid, const std::vector<int>& bits, double t_b,
                     double amp, double t_shift, bool all_ones_periodic, std::size_t n_bits_window) {
    const std::size_t lo = grid.band_lo(), hi = grid.band_hi();
    const double bin = grid.bin_hz();

    if (all_ones_periodic) {
        // Periodic all-ones train: geometric sum over one window period is
        // n_bits on bins that are multiples of n_fft / samples_per_bit and
        // zero elsewhere (roots-of-unity cancellation).
        const double ratio = t_b * bin;            // = samples_per_bit / n_fft
        const auto n_bits = static_cast<double>(n_bits_window);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double cycles = ratio * static_cast<double>(j);   // integer <=> line bin
            if (std::abs(cycles - std::round(cycles)) < 1e-9) {
                const double f = grid.frequency(j);
                acc[j] += amp * n_bits * std::polar(1.0, -kTwoPi * f * t_shift) * casc.values[j];
            }
        }
        return;
    }

    const std::complex<double> step_bit = std::polar(1.0, -kTwoPi * grid.frequency(lo) * t_b);
    const std::complex<double> step_bit_j = std::polar(1.0, -kTwoPi * bin * t_b);
    std::complex<double> bit_base = std::polar(1.0, -kTwoPi * grid.frequency(lo) * t_shift);
    const std::complex<double> shift_step = std::polar(1.0, -kTwoPi * bin * t_shift);

    // comb_j = sum_l d_l (e^{-j 2 pi f_j t_b})^l ; evaluate per bin by Horner.
    std::complex<double> w = step_bit;             // e^{-j 2 pi f_j t_b} at j = lo
    for (std::size_t j = lo; j <= hi; ++j) {
        std::complex<double> comb{0.0, 0.0};
        for (std::size_t l = bits.size(); l-- > 0;) comb = comb * w + static_cast<double>(bits[l]);
        acc[j] += amp * comb * bit_base * casc.values[j];
        w *= step_bit_j;
        bit_base *= shift_step;
    }
}

Waveform to_waveform(std::vector<std::complex<double>> spec, const SystemParams& params) {
    Waveform w;
    w.t_s = 1.0 / params.fs;
    w.samples = std::move(spec);
    fft::inverse(w.samples);
    const double scale = 2.0 * params.fs / (2.0 * params.delta_f);   // analytic + normalization
    for (auto& s : w.samples) s *= scale;
    return w;
}

} // namespace

BitStream::BitStream(std::vector<int> b, const SystemParams& params)
    : bits(std::move(b)), t_b(params.bit_period()) {
    if (bits.empty()) throw config_error("BitStream: empty");
    for (int v : bits)
        if (v != 0 && v != 1) throw config_error("BitStream: bits must be 0 or 1");
}

PhaserBank::PhaserBank(const SystemParams& params, const CodeSet& codes, const FrequencyGrid& grid)
    : n_(codes.size()), grid_(grid) {
    std::vector<Spectrum> tx(static_cast<std::size_t>(n_)), rx(static_cast<std::size_t>(n_));
    for (int u = 0; u < n_; ++u) {
        tx[static_cast<std::size_t>(u)] = transfer(codes.code(u), Side::tx, params, grid);
        rx[static_cast<std::size_t>(u)] = transfer(codes.code(u), Side::rx, params, grid);
    }
    cascades_.reserve(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k)
            cascades_.push_back(apply(tx[static_cast<std::size_t>(k)], rx[static_cast<std::size_t>(i)]));
}

const Spectrum& PhaserBank::cascade(int rx, int tx) const {
    return cascades_[static_cast<std::size_t>(rx) * static_cast<std::size_t>(n_) +
                     static_cast<std::size_t>(tx)];
}

Spectrum ook_dirac_train(const BitStream& bits, double g, double t_tx, const FrequencyGrid& grid) {
    if (g <= 0.0) throw domain_error("ook_dirac_train: amplitude must be positive");
    const double window = 1.0 / grid.bin_hz();
    const double span = static_cast<double>(bits.size()) * bits.t_b + t_tx;
    if (span > window * (1.0 + 1e-12))
        throw window_overflow_error("ook_dirac_train: bit train does not fit the time window");

    Spectrum out;
    out.bin_hz = grid.bin_hz();
    out.values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double f = grid.frequency(j);
        std::complex<double> comb{0.0, 0.0};
        for (std::size_t l = 0; l < bits.size(); ++l) {
            if (bits.bits[l])
                comb += std::polar(1.0, -kTwoPi * f * (static_cast<double>(l) * bits.t_b + t_tx));
        }
        out.values[j] = g * comb;
    }
    return out;
}

std::vector<double> dook_modulate(const std::vector<int>& nrz_bits, double bit_period,
                                  double xor_delay) {
    if (!(xor_delay > 0.0 && xor_delay < bit_period))
        throw domain_error("dook_modulate: xor_delay must lie in (0, bit_period)");
    std::vector<double> pulses;
    int level = 0;
    for (std::size_t l = 0; l < nrz_bits.size(); ++l) {
        const int b = nrz_bits[l];
        if (b != 0 && b != 1) throw domain_error("dook_modulate: bits must be 0 or 1");
        if (b != level) {
            pulses.push_back(static_cast<double>(l) * bit_period);
            level = b;
        }
    }
    return pulses;
}

DecodedLink simulate_link(const SystemParams& params, const CodeSet& codes,
                          const ChannelRealization& chan, const std::vector<BitStream>& bits,
                          int rx_index, StreamRng* noise_rng, const LinkOptions& opts,
                          const PhaserBank* bank) {
    const int n = codes.size();
    if (chan.n_users != n || static_cast<int>(bits.size()) != n)
        throw config_error("simulate_link: codes, channel and bit streams disagree on N");
    if (rx_index < 0 || rx_index >= n) throw config_error("simulate_link: rx_index out of range");
    if (params.n_users != n) throw config_error("simulate_link: params.n_users mismatch");

    std::optional<PhaserBank> local;
    if (!bank) {
        local.emplace(params, codes, make_grid(params));
        bank = &*local;
    }
    const FrequencyGrid& grid = bank->grid();
    const double window = params.window_s();
    const double t_b = params.bit_period();
    const std::size_t n_bits = bits[0].size();
    for (const auto& bs : bits)
        if (bs.size() != n_bits) throw config_error("simulate_link: bit streams of unequal length");

    if (opts.periodic) {
        const double span = static_cast<double>(n_bits) * t_b;
        if (std::abs(span - window) > 1e-9 * window)
            throw config_error("simulate_link: periodic mode needs window = n_bits * T_b");
    } else {
        double worst = 0.0;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                worst = std::max(worst, chan.tx_offset(k) + chan.delay(i, k));
        const double span = static_cast<double>(n_bits - 1) * t_b + worst + 2.0 * params.tau0 +
                            params.delta_tau;
        if (span > window)
            throw window_overflow_error("simulate_link: signal span exceeds the FFT window");
    }

    std::vector<int> ones(n_bits, 1);

    std::vector<std::complex<double>> desired(grid.size(), {0.0, 0.0});
    std::vector<std::complex<double>> mai(grid.size(), {0.0, 0.0});

    for (int k = 0; k < n; ++k) {
        const bool is_desired = (k == rx_index);
        const bool force_ones = !is_desired && opts.worst_case_interferers;
        const std::vector<int>& pattern = force_ones ? ones : bits[static_cast<std::size_t>(k)].bits;
        const bool all_ones = opts.periodic && std::all_of(pattern.begin(), pattern.end(),
                                                           [](int v) { return v == 1; });
        const double amp = is_desired ? 1.0 : chan.amplitude(rx_index, k);
        const double t_shift = chan.tx_offset(k) + chan.delay(rx_index, k);
        accumulate_user(is_desired ? desired : mai, bank->cascade(rx_index, k), grid, pattern, t_b,
                        amp, t_shift, all_ones, n_bits);
    }

    DecodedLink out;
    out.s_tilde = to_waveform(std::move(desired), params);
    out.x_mai = to_waveform(std::move(mai), params);

    out.noise.t_s = 1.0 / params.fs;
    out.noise.samples.assign(grid.size(), {0.0, 0.0});
    if (params.noise_sigma > 0.0) {
        if (!noise_rng) throw config_error("simulate_link: noise_sigma > 0 needs an rng");
        const double scale = params.noise_sigma / (2.0 * params.delta_f);
        for (auto& s : out.noise.samples) s = {scale * noise_rng->gaussian(), 0.0};
    }

    out.z.t_s = out.s_tilde.t_s;
    out.z.samples.resize(grid.size());
    for (std::size_t idx = 0; idx < grid.size(); ++idx)
        out.z.samples[idx] = out.s_tilde.samples[idx] + out.x_mai.samples[idx] +
                             out.noise.samples[idx];
    return out;
}

std::vector<std::complex<double>> sample_waveform(const Waveform& w,
                                                  const std::vector<double>& timing_s) {
    const std::size_t n = w.size();
    std::vector<std::complex<double>> spec = w.samples;
    fft::forward(spec);

    std::vector<std::complex<double>> out;
    out.reserve(timing_s.size());
    const double fs = 1.0 / w.t_s;
    const double bin = fs / static_cast<double>(n);
    for (double t : timing_s) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            // bins above Nyquist interpolate as negative frequencies
            const double f = (j <= n / 2) ? bin * static_cast<double>(j)
                                          : bin * static_cast<double>(j) - fs;
            acc += spec[j] * std::polar(1.0, kTwoPi * f * t);
        }
        out.push_back(acc / static_cast<double>(n));
    }
    return out;
}

std::vector<int> detect_bits(const DecodedLink& link, double threshold,
                             const std::vector<double>& timing_s) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw domain_error("detect_bits: threshold must lie in (0, 1)");
    const double window = static_cast<double>(link.z.size()) * link.z.t_s;
    for (double t : timing_s)
        if (t < 0.0 || t >= window) throw domain_error("detect_bits: timing outside window");

    const auto samples = sample_waveform(link.z, timing_s);
    std::vector<int> bits(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        bits[i] = samples[i].real() > threshold ? 1 : 0;
    return bits;
}

} // namespace dcma
