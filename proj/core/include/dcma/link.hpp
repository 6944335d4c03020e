#pragma once

#include <optional>
#include <vector>

#include "dcma/channel.hpp"
#include "dcma/coding.hpp"
#include "dcma/phaser.hpp"
#include "dcma/rng.hpp"
#include "dcma/sysconfig.hpp"

namespace dcma {

// OOK bit train at the system bit period T_b = 2 delta_tau.
struct BitStream {
    std::vector<int> bits;   // each 0 or 1
    double t_b = 0.0;

    BitStream(std::vector<int> b, const SystemParams& params);
    std::size_t size() const { return bits.size(); }
};

// Precomputed transfer functions for one code set; immutable, shared across
// Monte Carlo workers.
class PhaserBank {
public:
    PhaserBank(const SystemParams& params, const CodeSet& codes, const FrequencyGrid& grid);

    const Spectrum& cascade(int rx, int tx) const;
    const FrequencyGrid& grid() const { return grid_; }
    int n_users() const { return n_; }

private:
    int n_;
    FrequencyGrid grid_;
    std::vector<Spectrum> cascades_;   // row-major rx * n + tx
};

struct LinkOptions {
    // Steady-state circular simulation: the bit trains must fill the window
    // exactly (window = n_bits * T_b) and wrap-around is the periodic
    // extension rather than an error.
    bool periodic = false;
    // Force every interferer bit to 1 (maximal MAI).
    bool worst_case_interferers = false;
};

// Decoded signal split into its exact components, all normalized by the
// matched-cascade peak 2 delta_f.  z = s_tilde + x_mai + noise sample-wise.
struct DecodedLink {
    Waveform z;
    Waveform s_tilde;
    Waveform x_mai;
    Waveform noise;
};

// Spectrum of an OOK Dirac train: sum_l d_l g e^{-j 2 pi f (l T_b + t_tx)}
// across the full grid.  A Dirac is a flat unit spectrum; band limiting
// happens in the phasers.
Spectrum ook_dirac_train(const BitStream& bits, double g, double t_tx, const FrequencyGrid& grid);

// Differential OOK: one pulse instant per NRZ level change (initial level 0).
// xor_delay is the modulator's XOR path delay and must lie in (0, bit_period).
std::vector<double> dook_modulate(const std::vector<int>& nrz_bits, double bit_period,
                                  double xor_delay);

// Full decode at receiver rx_index: per-user trains through TX phasers and
// LOS channels, summed, through the RX phaser, plus AWGN.  noise_rng may be
// null when params.noise_sigma == 0.
DecodedLink simulate_link(const SystemParams& params, const CodeSet& codes,
                          const ChannelRealization& chan, const std::vector<BitStream>& bits,
                          int rx_index, StreamRng* noise_rng, const LinkOptions& opts = {},
                          const PhaserBank* bank = nullptr);

// Threshold detection at the given instants: bit = 1 iff the real part of the
// trig-interpolated decoded signal exceeds the threshold.  Timing is
// genie-aided (t_TXi + t_ii + 2 tau0 + l T_b).
std::vector<int> detect_bits(const DecodedLink& link, double threshold,
                             const std::vector<double>& timing_s);

// Exact-instant samples of a waveform (trig interpolation of the sampled
// sequence); used by detection and the Monte Carlo drivers.
std::vector<std::complex<double>> sample_waveform(const Waveform& w,
                                                  const std::vector<double>& timing_s);

} // namespace dcma
