#include "dcma/sysconfig.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "dcma/errors.hpp"

namespace dcma {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(double x) {
    std::size_t n = 1;
    while (static_cast<double>(n) < x) n <<= 1;
    return n;
}

} // namespace

void SystemParams::validate() const {
    std::ostringstream err;
    if (delta_f <= 0.0)
        err << "delta_f must be positive";
    else if (f0 - delta_f / 2.0 <= 0.0)
        err << "band must stay above DC: f0 - delta_f/2 = " << (f0 - delta_f / 2.0);
    else if (delta_tau <= 0.0)
        err << "delta_tau must be positive";
    else if (tau0 < delta_tau / 2.0)
        err << "tau0 < delta_tau/2 would give negative encoding group delays";
    else if (n_users < 1)
        err << "n_users must be >= 1";
    else if (fs < 2.0 * (f0 + delta_f / 2.0))
        err << "fs = " << fs << " does not resolve the passband (need >= " << 2.0 * (f0 + delta_f / 2.0) << ")";
    else if (!is_power_of_two(n_fft))
        err << "n_fft must be a power of two, got " << n_fft;
    else if (window_s() < 4.0 * delta_tau)
        err << "time window " << window_s() << " s shorter than two bit periods (" << 4.0 * delta_tau << " s)";
    else if (noise_sigma < 0.0)
        err << "noise_sigma must be >= 0";
    else
        return;
    throw config_error("SystemParams: " + err.str());
}

std::size_t FrequencyGrid::index_of(double freq_hz) const {
    const double idx = freq_hz / bin_hz_;
    const auto rounded = static_cast<std::size_t>(std::llround(idx));
    return rounded < n_ ? rounded : n_ - 1;
}

std::vector<double> FrequencyGrid::frequencies() const {
    std::vector<double> f(n_);
    for (std::size_t j = 0; j < n_; ++j) f[j] = frequency(j);
    return f;
}

FrequencyGrid make_grid(const SystemParams& params) {
    params.validate();

    FrequencyGrid g;
    g.n_ = params.n_fft;
    g.fs_ = params.fs;
    g.bin_hz_ = params.fs / static_cast<double>(params.n_fft);

    // Closed interval; the epsilon keeps bins that sit exactly on a band edge
    // from dropping out to rounding.
    const double eps = g.bin_hz_ * 1e-9;
    const double lo = params.band_lo_hz() - eps;
    const double hi = params.band_hi_hz() + eps;
    g.band_lo_ = static_cast<std::size_t>(std::ceil(lo / g.bin_hz_));
    g.band_hi_ = static_cast<std::size_t>(std::floor(hi / g.bin_hz_));

    if (g.band_hi_ >= g.n_ || g.band_hi_ < g.band_lo_)
        throw config_error("make_grid: passband does not fit the grid");
    if (g.band_count() < 64)
        throw config_error("make_grid: passband resolved by fewer than 64 bins");
    return g;
}

SystemParams params_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("params_from_json: ") + e.what());
    }

    SystemParams p;
    try {
        p.f0 = j.at("f0").get<double>();
        p.delta_f = j.at("delta_f").get<double>();
        p.delta_tau = j.at("delta_tau").get<double>();
        p.n_users = j.at("n_users").get<int>();
        p.fs = j.at("fs").get<double>();
        p.tau0 = j.value("tau0", p.delta_tau);
        p.noise_sigma = j.value("noise_sigma", 0.0);
        if (j.contains("n_fft"))
            p.n_fft = j.at("n_fft").get<std::size_t>();
        else
            p.n_fft = next_pow2(p.fs * 8.0 * p.delta_tau);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("params_from_json: ") + e.what());
    }
    p.validate();
    return p;
}

std::string params_to_json(const SystemParams& p) {
    nlohmann::json j{{"f0", p.f0},
                     {"delta_f", p.delta_f},
                     {"tau0", p.tau0},
                     {"delta_tau", p.delta_tau},
                     {"n_users", p.n_users},
                     {"fs", p.fs},
                     {"n_fft", p.n_fft},
                     {"noise_sigma", p.noise_sigma}};
    return j.dump(2);
}

} // namespace dcma
