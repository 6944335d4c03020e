#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "dcma/coding.hpp"
#include "dcma/sysconfig.hpp"

namespace dcma {

// Complex frequency-domain samples aligned to a FrequencyGrid.  The spectrum
// is one-sided: everything a phaser emits is zero outside the passband, and
// the corresponding waveforms are analytic signals.
struct Spectrum {
    std::vector<std::complex<double>> values;
    double bin_hz = 0.0;

    std::size_t size() const { return values.size(); }
};

// Complex analytic-signal time samples; the real part is the passband signal
// and the magnitude its envelope.
struct Waveform {
    std::vector<std::complex<double>> samples;
    double t_s = 0.0;   // seconds per sample

    std::size_t size() const { return samples.size(); }
    double time(std::size_t idx) const { return static_cast<double>(idx) * t_s; }
    double envelope(std::size_t idx) const { return std::abs(samples[idx]); }

    // sum |s|^2 * t_s of the real passband signal Re(s).
    double real_energy() const;
};

// Encoding/decoding phaser transfer function: unit magnitude in band with
// phase -omega tau0 +- phi(omega), exactly zero outside.
Spectrum transfer(const ChebyshevCode& code, Side side, const SystemParams& params,
                  const FrequencyGrid& grid);

// Product H_TX_k * H_RX_i of the pair's transfers.
Spectrum cascaded_transfer(const ChebyshevCode& rx_code, const ChebyshevCode& tx_code,
                           const SystemParams& params, const FrequencyGrid& grid);

// Inverse FFT with the analytic-signal scaling 2 fs, so a matched cascade
// peaks at 2 delta_f before normalization.
Waveform impulse_response(const Spectrum& spec, const SystemParams& params);

// Divides by the matched-cascade peak 2 delta_f.
Waveform normalize(const Waveform& w, const SystemParams& params);

// Pointwise product on a common grid.
Spectrum apply(const Spectrum& spec_in, const Spectrum& transfer_fn);

// CSV dump, columns (index, time_or_freq, real, imag, magnitude).
void dump_csv(std::ostream& os, const Waveform& w);
void dump_csv(std::ostream& os, const Spectrum& s);

} // namespace dcma
