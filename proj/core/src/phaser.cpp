#include "dcma/phaser.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "dcma/errors.hpp"
#include "dcma/fft.hpp"

namespace dcma {

double Waveform::real_energy() const {
    double e = 0.0;
    for (const auto& s : samples) e += s.real() * s.real();
    return e * t_s;
}

Spectrum transfer(const ChebyshevCode& code, Side side, const SystemParams& params,
                  const FrequencyGrid& grid) {
    Spectrum out;
    out.bin_hz = grid.bin_hz();
    out.values.assign(grid.size(), {0.0, 0.0});
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t j = grid.band_lo(); j <= grid.band_hi(); ++j) {
        const double f = grid.frequency(j);
        const double ph = -two_pi * f * params.tau0 + phase(code, side, params, f);
        out.values[j] = std::polar(1.0, ph);
    }
    return out;
}

Spectrum cascaded_transfer(const ChebyshevCode& rx_code, const ChebyshevCode& tx_code,
                           const SystemParams& params, const FrequencyGrid& grid) {
    return apply(transfer(tx_code, Side::tx, params, grid),
                 transfer(rx_code, Side::rx, params, grid));
}

Waveform impulse_response(const Spectrum& spec, const SystemParams& params) {
    Waveform w;
    w.t_s = 1.0 / params.fs;
    w.samples = spec.values;
    fft::inverse(w.samples);
    const double scale = 2.0 * params.fs;
    for (auto& s : w.samples) s *= scale;
    return w;
}

Waveform normalize(const Waveform& w, const SystemParams& params) {
    if (params.delta_f <= 0.0) throw domain_error("normalize: delta_f must be positive");
    Waveform out = w;
    const double inv = 1.0 / (2.0 * params.delta_f);
    for (auto& s : out.samples) s *= inv;
    return out;
}

Spectrum apply(const Spectrum& spec_in, const Spectrum& transfer_fn) {
    if (spec_in.size() != transfer_fn.size() || spec_in.bin_hz != transfer_fn.bin_hz)
        throw grid_mismatch_error("apply: spectra on different grids");
    Spectrum out;
    out.bin_hz = spec_in.bin_hz;
    out.values.resize(spec_in.size());
    for (std::size_t j = 0; j < spec_in.size(); ++j)
        out.values[j] = spec_in.values[j] * transfer_fn.values[j];
    return out;
}

namespace {

void dump_rows(std::ostream& os, const char* axis, double step,
               const std::vector<std::complex<double>>& v) {
    os << "index," << axis << ",real,imag,magnitude\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << i << ',' << static_cast<double>(i) * step << ',' << v[i].real() << ','
           << v[i].imag() << ',' << std::abs(v[i]) << '\n';
    }
}

} // namespace

void dump_csv(std::ostream& os, const Waveform& w) { dump_rows(os, "time", w.t_s, w.samples); }

void dump_csv(std::ostream& os, const Spectrum& s) { dump_rows(os, "freq", s.bin_hz, s.values); }

} // namespace dcma
