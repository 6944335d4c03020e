#pragma once

#include <string>
#include <vector>

#include "dcma/sysconfig.hpp"

namespace dcma {

enum class Side { tx, rx };

// A dispersion code: the signed order of a Chebyshev group-delay profile.
// Negative orders follow the convention -T_m(x) = T_{-m}(x).
struct ChebyshevCode {
    int order = 1;
    explicit ChebyshevCode(int m);
};

// Ordered per-user code assignment.  Orders must be pairwise distinct; the
// TX of user i uses +m_i and its RX the conjugate -m_i.
class CodeSet {
public:
    explicit CodeSet(std::vector<int> orders);

    int size() const { return static_cast<int>(orders_.size()); }
    int order(int user) const { return orders_.at(static_cast<std::size_t>(user)); }
    const std::vector<int>& orders() const { return orders_; }
    ChebyshevCode code(int user) const { return ChebyshevCode(order(user)); }

    // True when any |m_i| == 1.  The Gaussian MAI approximation breaks for
    // linear group delays, so analysis flags such sets.
    bool contains_unit_order() const;

    std::string to_json() const;
    static CodeSet from_json(const std::string& json_array);

private:
    std::vector<int> orders_;
};

// Signed Chebyshev evaluation: sign(m) * T_|m|(x) via cos(m acos x).
// x is clamped to [-1, 1] when within 1e-12; beyond that throws domain_error.
double cheb_eval(int m, double x);

// Coding group delay of one phaser (TX: tau0 + (dtau/2) T_m, RX conjugate).
double group_delay(const ChebyshevCode& code, Side side, const SystemParams& params, double f_hz);

// Dispersive phase phi(f), the negative integral of the delay deviation from
// the lower band edge; closed-form Chebyshev antiderivative.
double phase(const ChebyshevCode& code, Side side, const SystemParams& params, double f_hz);

// Group delay of the TX_k -> RX_i cascade: 2 tau0 + tau_k(f) - tau_i(f).
double cascaded_group_delay(const ChebyshevCode& rx_code, const ChebyshevCode& tx_code,
                            const SystemParams& params, double f_hz);

// max - min of the cascaded group delay over the band (dense grid search).
double delay_swing(const ChebyshevCode& rx_code, const ChebyshevCode& tx_code,
                   const SystemParams& params);

// All-odd coding set [3,-3,5,-5,...]; excludes +-1.
CodeSet all_odd_code_set(int n);

} // namespace dcma
