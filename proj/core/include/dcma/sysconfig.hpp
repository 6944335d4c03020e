#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dcma {

// System-level parameters shared by every module.  All values are SI (Hz, s).
// Immutable after validate(); cheap to copy.
struct SystemParams {
    double f0 = 0.0;          // center frequency
    double delta_f = 0.0;     // system bandwidth
    double tau0 = 0.0;        // reference group delay
    double delta_tau = 0.0;   // group delay swing
    int n_users = 1;
    double fs = 0.0;          // sample rate
    std::size_t n_fft = 0;    // FFT length, power of two
    double noise_sigma = 0.0; // AWGN sigma, un-normalized signal units

    double omega0() const { return 2.0 * 3.14159265358979323846 * f0; }
    double band_lo_hz() const { return f0 - delta_f / 2.0; }
    double band_hi_hz() const { return f0 + delta_f / 2.0; }
    double bit_period() const { return 2.0 * delta_tau; }   // T_b
    double window_s() const { return static_cast<double>(n_fft) / fs; }
    double sample_period() const { return 1.0 / fs; }

    // Throws config_error if any invariant is violated.
    void validate() const;
};

// Uniform FFT-ordered frequency axis plus the passband mask, precomputed once
// and shared (read-only) by every transfer-function builder.
class FrequencyGrid {
public:
    FrequencyGrid() = default;

    std::size_t size() const { return n_; }
    double bin_hz() const { return bin_hz_; }
    double fs() const { return fs_; }
    double frequency(std::size_t idx) const { return static_cast<double>(idx) * bin_hz_; }
    std::size_t index_of(double freq_hz) const;

    bool in_band(std::size_t idx) const { return idx >= band_lo_ && idx <= band_hi_; }
    std::size_t band_lo() const { return band_lo_; }
    std::size_t band_hi() const { return band_hi_; }   // inclusive
    std::size_t band_count() const { return band_hi_ - band_lo_ + 1; }

    std::vector<double> frequencies() const;

private:
    friend FrequencyGrid make_grid(const SystemParams& params);

    std::size_t n_ = 0;
    double fs_ = 0.0;
    double bin_hz_ = 0.0;
    std::size_t band_lo_ = 0;
    std::size_t band_hi_ = 0;
};

// Builds the grid for validated params.  Bins span [0, fs); the band mask is
// the closed interval [f0 - delta_f/2, f0 + delta_f/2], edge bins included at
// full amplitude.
FrequencyGrid make_grid(const SystemParams& params);

// Loads SystemParams from a JSON object string with keys equal to the field
// names.  tau0 defaults to delta_tau, noise_sigma to 0, and n_fft to the
// smallest power of two giving a window of at least four bit periods.
SystemParams params_from_json(const std::string& json_text);
std::string params_to_json(const SystemParams& params);

} // namespace dcma
