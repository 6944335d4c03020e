#include "dcma/coding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dcma/errors.hpp"

namespace dcma {

namespace {

constexpr double kDomainTol = 1e-12;

double clamp_unit(double x) {
    if (x > 1.0) {
        if (x > 1.0 + kDomainTol) throw domain_error("cheb_eval: |x| > 1");
        return 1.0;
    }
    if (x < -1.0) {
        if (x < -1.0 - kDomainTol) throw domain_error("cheb_eval: |x| > 1");
        return -1.0;
    }
    return x;
}

// x = (f - f0) / (delta_f / 2); throws when f is outside the band.
double band_coordinate(const SystemParams& p, double f_hz) {
    const double x = (f_hz - p.f0) / (p.delta_f / 2.0);
    if (std::abs(x) > 1.0 + kDomainTol)
        throw domain_error("frequency outside the system band");
    return std::clamp(x, -1.0, 1.0);
}

double cheb_unsigned(int m, double x) { return std::cos(static_cast<double>(m) * std::acos(x)); }

// Antiderivative of T_m (m >= 1): int T_1 = x^2/2, otherwise the usual
// T_{m+1}/(m+1) - T_{m-1}/(m-1) halves.
double cheb_primitive(int m, double x) {
    if (m == 1) return x * x / 2.0;
    return 0.5 * (cheb_unsigned(m + 1, x) / (m + 1) - cheb_unsigned(m - 1, x) / (m - 1));
}

// int_{-1}^{x} T_m(u) du with the signed-order convention.
double cheb_integral(int m, double x) {
    const int mm = std::abs(m);
    const double val = cheb_primitive(mm, x) - cheb_primitive(mm, -1.0);
    return m > 0 ? val : -val;
}

// Delay deviation of user code m from tau0, as a function of x.
double deviation(int m, double half_swing, double x) { return half_swing * (m > 0 ? 1.0 : -1.0) * cheb_unsigned(std::abs(m), x); }

} // namespace

ChebyshevCode::ChebyshevCode(int m) : order(m) {
    if (m == 0) throw domain_error("ChebyshevCode: order must be nonzero");
}

CodeSet::CodeSet(std::vector<int> orders) : orders_(std::move(orders)) {
    if (orders_.empty()) throw config_error("CodeSet: empty");
    std::set<int> seen;
    for (int m : orders_) {
        if (m == 0) throw config_error("CodeSet: order 0 is not a valid code");
        if (!seen.insert(m).second) {
            std::ostringstream os;
            os << "CodeSet: duplicate order " << m;
            throw config_error(os.str());
        }
    }
}

bool CodeSet::contains_unit_order() const {
    return std::any_of(orders_.begin(), orders_.end(), [](int m) { return m == 1 || m == -1; });
}

std::string CodeSet::to_json() const { return nlohmann::json(orders_).dump(); }

CodeSet CodeSet::from_json(const std::string& json_array) {
    try {
        auto j = nlohmann::json::parse(json_array);
        return CodeSet(j.get<std::vector<int>>());
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("CodeSet::from_json: ") + e.what());
    }
}

double cheb_eval(int m, double x) {
    if (m == 0) throw domain_error("cheb_eval: order must be nonzero");
    x = clamp_unit(x);
    const double t = cheb_unsigned(std::abs(m), x);
    return m > 0 ? t : -t;
}

double group_delay(const ChebyshevCode& code, Side side, const SystemParams& params, double f_hz) {
    const double x = band_coordinate(params, f_hz);
    const double dev = deviation(code.order, params.delta_tau / 2.0, x);
    return side == Side::tx ? params.tau0 + dev : params.tau0 - dev;
}

double phase(const ChebyshevCode& code, Side side, const SystemParams& params, double f_hz) {
    const double x = band_coordinate(params, f_hz);
    // phi = -(dtau/2)(dOmega/2) * int_{-1}^{x} T_m, with dOmega/2 = pi*delta_f
    const double phi_tx = -(params.delta_tau / 2.0) * (std::numbers::pi * params.delta_f) *
                          cheb_integral(code.order, x);
    return side == Side::tx ? phi_tx : -phi_tx;
}

double cascaded_group_delay(const ChebyshevCode& rx_code, const ChebyshevCode& tx_code,
                            const SystemParams& params, double f_hz) {
    const double x = band_coordinate(params, f_hz);
    const double half = params.delta_tau / 2.0;
    return 2.0 * params.tau0 + deviation(tx_code.order, half, x) - deviation(rx_code.order, half, x);
}

double delay_swing(const ChebyshevCode& rx_code, const ChebyshevCode& tx_code,
                   const SystemParams& params) {
    // 1e5-point scan; Chebyshev extrema converge O(n^-2) on a uniform grid.
    constexpr int kPoints = 100001;
    const double half = params.delta_tau / 2.0;
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double x = -1.0 + 2.0 * static_cast<double>(i) / (kPoints - 1);
        const double d = deviation(tx_code.order, half, x) - deviation(rx_code.order, half, x);
        if (i == 0) {
            lo = hi = d;
        } else {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    return hi - lo;
}

CodeSet all_odd_code_set(int n) {
    if (n < 2) throw domain_error("all_odd_code_set: need n >= 2");
    std::vector<int> orders(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int mag = 3 + 2 * (i / 2);
        orders[static_cast<std::size_t>(i)] = (i % 2 == 0) ? mag : -mag;
    }
    return CodeSet(std::move(orders));
}

} // namespace dcma
