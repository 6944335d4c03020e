#include "dcma/channel.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "dcma/errors.hpp"

namespace dcma {

void ChannelEnsembleParams::validate() const {
    if (d_min_m < 0.0 || d_min_m >= d_max_m)
        throw config_error("ChannelEnsembleParams: need 0 <= d_min < d_max");
    if (alpha_min_sq < 0.0 || alpha_min_sq > alpha_max_sq)
        throw config_error("ChannelEnsembleParams: need 0 <= alpha_min_sq <= alpha_max_sq");
}

ChannelRealization ChannelRealization::identity(int n_users) {
    ChannelRealization c;
    c.n_users = n_users;
    const auto n2 = static_cast<std::size_t>(n_users) * static_cast<std::size_t>(n_users);
    c.alpha.assign(n2, 1.0);
    c.t_chan.assign(n2, 0.0);
    c.t_tx.assign(static_cast<std::size_t>(n_users), 0.0);
    return c;
}

std::string ChannelRealization::to_json() const {
    nlohmann::json j{{"n_users", n_users}, {"alpha", alpha}, {"t_chan", t_chan}, {"t_tx", t_tx}};
    return j.dump(2);
}

ChannelRealization ChannelRealization::from_json(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        ChannelRealization c;
        c.n_users = j.at("n_users").get<int>();
        c.alpha = j.at("alpha").get<std::vector<double>>();
        c.t_chan = j.at("t_chan").get<std::vector<double>>();
        c.t_tx = j.at("t_tx").get<std::vector<double>>();
        const auto n2 = static_cast<std::size_t>(c.n_users) * static_cast<std::size_t>(c.n_users);
        if (c.alpha.size() != n2 || c.t_chan.size() != n2 ||
            c.t_tx.size() != static_cast<std::size_t>(c.n_users))
            throw config_error("ChannelRealization::from_json: dimension mismatch");
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("ChannelRealization::from_json: ") + e.what());
    }
}

double friis_amplitude(double gain_tx, double gain_rx, double f0_hz, double t_ik_s) {
    if (t_ik_s <= 0.0) throw domain_error("friis_amplitude: delay must be positive");
    if (gain_tx <= 0.0 || gain_rx <= 0.0) throw domain_error("friis_amplitude: gains must be positive");
    const double omega0 = 2.0 * std::numbers::pi * f0_hz;
    return std::sqrt(gain_tx * gain_rx) / (2.0 * omega0 * t_ik_s);
}

ChannelRealization draw_realization(const SystemParams& params, const ChannelEnsembleParams& ens,
                                    StreamRng& rng) {
    ens.validate();
    const int n = params.n_users;
    ChannelRealization c = ChannelRealization::identity(n);

    const double t_lo = ens.d_min_m / kSpeedOfLight;
    const double t_hi = ens.d_max_m / kSpeedOfLight;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const auto idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                             static_cast<std::size_t>(k);
            c.t_chan[idx] = rng.uniform(t_lo, t_hi);
            c.alpha[idx] = (i == k) ? 1.0
                                    : std::sqrt(rng.uniform(ens.alpha_min_sq, ens.alpha_max_sq));
        }
    }
    for (int k = 0; k < n; ++k)
        c.t_tx[static_cast<std::size_t>(k)] = rng.uniform(0.0, params.bit_period());
    return c;
}

Spectrum channel_transfer(double alpha, double t_s, const FrequencyGrid& grid) {
    if (t_s < 0.0) throw domain_error("channel_transfer: delay must be >= 0");
    Spectrum out;
    out.bin_hz = grid.bin_hz();
    out.values.resize(grid.size());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t j = 0; j < grid.size(); ++j)
        out.values[j] = std::polar(alpha, -two_pi * grid.frequency(j) * t_s);
    return out;
}

} // namespace dcma
