#pragma once

#include <string>
#include <vector>

#include "dcma/phaser.hpp"
#include "dcma/rng.hpp"
#include "dcma/sysconfig.hpp"

namespace dcma {

inline constexpr double kSpeedOfLight = 299792458.0;

// Randomized LOS ensemble: link delays uniform in distance, link intensities
// uniform in [alpha_min_sq, alpha_max_sq].
struct ChannelEnsembleParams {
    double d_min_m = 0.0;
    double d_max_m = 4.0;
    double alpha_min_sq = 1.0;
    double alpha_max_sq = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// One drawn channel: amplitudes alpha_ik (alpha_ii = 1), link delays t_ik and
// per-transmitter offsets t_TXk.  Immutable after draw_realization.
struct ChannelRealization {
    int n_users = 0;
    std::vector<double> alpha;    // row-major N x N
    std::vector<double> t_chan;   // row-major N x N, seconds
    std::vector<double> t_tx;     // length N, seconds

    double amplitude(int rx, int tx) const { return alpha[idx(rx, tx)]; }
    double delay(int rx, int tx) const { return t_chan[idx(rx, tx)]; }
    double tx_offset(int tx) const { return t_tx[static_cast<std::size_t>(tx)]; }

    // Identity channel: alpha = 1, all delays and offsets zero (the shorted,
    // synchronized scenario).
    static ChannelRealization identity(int n_users);

    std::string to_json() const;
    static ChannelRealization from_json(const std::string& text);

private:
    std::size_t idx(int rx, int tx) const {
        return static_cast<std::size_t>(rx) * static_cast<std::size_t>(n_users) +
               static_cast<std::size_t>(tx);
    }
};

// Friis LOS amplitude sqrt(G_tx G_rx) / (2 omega0 t); gains are linear power
// gains and t the free-space delay.
double friis_amplitude(double gain_tx, double gain_rx, double f0_hz, double t_ik_s);

// Draws one realization: t_ik ~ U(d_min/c, d_max/c), alpha_ik^2 ~ U(a_min^2,
// a_max^2) off the diagonal, t_TXk ~ U(0, 2 delta_tau).  Deterministic for a
// given rng stream.
ChannelRealization draw_realization(const SystemParams& params, const ChannelEnsembleParams& ens,
                                    StreamRng& rng);

// Full-grid single-ray transfer alpha * e^{-j 2 pi f t}; band limiting is the
// phasers' job.
Spectrum channel_transfer(double alpha, double t_s, const FrequencyGrid& grid);

} // namespace dcma
