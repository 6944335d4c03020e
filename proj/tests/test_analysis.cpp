#include <doctest.h>

#include <cmath>
#include <limits>

#include "dcma/analysis.hpp"
#include "dcma/errors.hpp"
#include "oracles.hpp"

using namespace dcma;

namespace {

SystemParams mai_params(double df = 10e9) {
    SystemParams p;
    p.f0 = 10e9;
    p.delta_f = df;
    p.delta_tau = 10e-9;
    p.tau0 = 10e-9;
    p.n_users = 2;
    p.fs = 51.2e9;
    p.n_fft = 4096;   // window = 4 bit periods
    p.validate();
    return p;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("mai_stats basics") {
    const std::vector<double> v{1.0, -1.0, 3.0, -3.0};
    const auto st = mai_stats(v, 4);
    CHECK(st.mu_hat == doctest::Approx(0.0));
    CHECK(st.sigma_sq_hat == doctest::Approx(5.0));
    std::uint64_t total = 0;
    for (auto c : st.counts) total += c;
    CHECK(total == v.size());

    const auto zeros = mai_stats(std::vector<double>(100, 0.0), 10);
    CHECK(zeros.mu_hat == 0.0);
    CHECK(zeros.sigma_sq_hat == 0.0);

    CHECK_THROWS_AS(mai_stats({}, 10), domain_error);
}

TEST_CASE("gaussian pdf") {
    MaiStats st;
    st.mu_hat = 0.2;
    st.sigma_sq_hat = 0.04;
    CHECK(gaussian_pdf(st.mu_hat, st) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * 3.14159265358979323846 * st.sigma_sq_hat)));
    CHECK(gaussian_pdf(st.mu_hat + 0.1, st) == doctest::Approx(gaussian_pdf(st.mu_hat - 0.1, st)));

    const double integral = oracle::adaptive_simpson(
        [&](double x) { return gaussian_pdf(x, st); }, st.mu_hat - 8.0 * 0.2, st.mu_hat + 8.0 * 0.2,
        1e-12);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));

    MaiStats degenerate;
    CHECK_THROWS_AS(gaussian_pdf(0.0, degenerate), domain_error);
}

TEST_CASE("sir relations") {
    MaiStats st;
    st.sigma_sq_hat = 0.0025;
    CHECK(sir_statistical(st) == doctest::Approx(400.0));
    st.sigma_sq_hat = 0.0075;
    CHECK(sir_statistical(st) == doctest::Approx(400.0 / 3.0));
    st.sigma_sq_hat = 1.0;
    CHECK(sir_statistical(st) == doctest::Approx(1.0));
    st.sigma_sq_hat = 0.0;
    CHECK_THROWS_AS(sir_statistical(st), domain_error);

    SystemParams p;
    p.delta_tau = 1e-9;
    p.delta_f = 4e9;
    CHECK(sir_analytic(p, 2, 1.0) == 16.0);
    p.delta_tau = 10e-9;
    p.delta_f = 10e9;
    CHECK(sir_analytic(p, 4, 1.0) == doctest::Approx(400.0 / 3.0));
    CHECK(1.0 / sir_analytic(p, 4, 1.0) == doctest::Approx(0.0075));
    p.delta_tau = 6e-9;
    p.delta_f = 1e9;   // DSBP = 6
    CHECK(sir_analytic(p, 12, 1.0) == doctest::Approx(24.0 / 11.0));
    CHECK_THROWS_AS(sir_analytic(p, 1, 1.0), domain_error);
    CHECK_THROWS_AS(sir_analytic(p, 4, 0.0), domain_error);
}

TEST_CASE("sinr combination") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(sinr(400.0, inf) == 400.0);
    CHECK(sinr(12.0, 12.0) == doctest::Approx(6.0));
    CHECK(sinr(400.0, 100.0) == doctest::Approx(80.0));
    CHECK_THROWS_AS(sinr(0.0, 10.0), domain_error);
}

TEST_CASE("q function") {
    CHECK(q_function(0.0) == doctest::Approx(0.5));
    CHECK(q_function(2.0) == doctest::Approx(0.022750).epsilon(5e-5));
    CHECK(std::abs(q_function(2.0) - oracle::q_by_quadrature(2.0)) < 1e-6);
    CHECK(std::abs(q_function(0.7) - oracle::q_by_quadrature(0.7)) < 1e-10);
    CHECK(std::abs(q_function(4.2) - oracle::q_by_quadrature(4.2)) < 1e-12);
    CHECK(q_function(-std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
    double prev = 1.1;
    for (double x = -5.0; x <= 5.0; x += 0.25) {
        CHECK(q_function(x) < prev);
        prev = q_function(x);
    }
}

TEST_CASE("bep") {
    const auto r = bep({16.0, 16.0});
    CHECK(r.per_receiver[0] == doctest::Approx(q_function(2.0)));
    CHECK(r.average == doctest::Approx(q_function(2.0)));
    CHECK(bep({1e12}).average < 1e-9);
    for (double s : {0.01, 1.0, 44.0, 1e6}) {
        const auto one = bep({s});
        CHECK(one.average >= 0.0);
        CHECK(one.average <= 0.5);
    }
    CHECK_THROWS_AS(bep({}), domain_error);
    CHECK_THROWS_AS(bep({-1.0}), domain_error);

    const auto rr = bep_from_sir({400.0, 100.0}, 100.0);
    CHECK(rr.sinr_i[0] == doctest::Approx(80.0));
    CHECK(rr.sinr_i[1] == doctest::Approx(50.0));
    CHECK(rr.average ==
          doctest::Approx(0.5 * (q_function(std::sqrt(80.0) / 2.0) +
                                 q_function(std::sqrt(50.0) / 2.0))));
}

TEST_CASE("spectral efficiency") {
    SystemParams p;
    p.delta_tau = 6e-9;
    p.delta_f = 1e9;
    CHECK(spectral_efficiency(12, p) == doctest::Approx(1.0));
    p.delta_tau = 12e-9;
    CHECK(spectral_efficiency(12, p) == doctest::Approx(0.5));
    p.delta_tau = 1e-9;
    p.delta_f = 4e9;
    CHECK(spectral_efficiency(2, p) == doctest::Approx(0.25));
}

TEST_CASE("incomplete gamma and chi-square tail") {
    // gamma_p(1/2, x) = erf(sqrt(x))
    for (double x : {0.1, 0.5, 2.0, 11.0})
        CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
    CHECK(chi2_sf(0.0, 10) == 1.0);
    // chi2 with 2 dof is exponential(1/2)
    CHECK(chi2_sf(3.0, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
    // 1% critical value at 47 dof is about 72.44
    CHECK(chi2_sf(72.443, 47) == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("normal fit accepts gaussian draws and rejects uniform ones") {
    StreamRng rng(2024, 0);
    std::vector<double> gauss(20000);
    for (auto& v : gauss) v = 0.3 + 0.05 * rng.gaussian();
    const auto ok = normal_fit_chi2(gauss);
    CHECK(ok.passed);
    CHECK(ok.dof == 47);

    std::vector<double> flat(20000);
    for (auto& v : flat) v = rng.uniform();
    CHECK_FALSE(normal_fit_chi2(flat).passed);

    CHECK_THROWS_AS(normal_fit_chi2(gauss, 10), domain_error);
    CHECK_THROWS_AS(normal_fit_chi2(std::vector<double>(60, 1.0)), domain_error);
}

TEST_CASE("shuffled subsample is deterministic and draws from the pool") {
    std::vector<double> pool(1000);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<double>(i);
    StreamRng a(9, 1), b(9, 1);
    const auto s1 = shuffled_subsample(pool, 100, a);
    const auto s2 = shuffled_subsample(pool, 100, b);
    CHECK(s1 == s2);
    for (double v : s1) CHECK((v >= 0.0 && v < 1000.0));
    StreamRng c(9, 2);
    CHECK(shuffled_subsample(pool, 100, c) != s1);
}

TEST_CASE("worst-case MAI sampling reproduces the closed-form variance") {
    const auto p = mai_params();
    MaiSamplingProtocol proto;
    proto.trials = 30;
    proto.seed = 77;
    const auto set = collect_mai_samples(p, CodeSet({3, -3}), ChannelEnsembleParams{}, proto);
    const auto st = mai_stats(set.samples, 81);
    CHECK(st.n_samples >= 10000);
    CHECK(st.sigma_sq_hat == doctest::Approx(0.0025).epsilon(0.10));
    CHECK(std::abs(st.mu_hat) < 3.0 * std::sqrt(st.sigma_sq_hat / static_cast<double>(st.n_samples)));
    // per-realization variances pool to the same value
    double acc = 0.0;
    for (double s2 : set.per_realization_sigma_sq) acc += s2;
    CHECK(acc / static_cast<double>(set.per_realization_sigma_sq.size()) ==
          doctest::Approx(0.0025).epsilon(0.10));
}

TEST_CASE("monte carlo bep: clean single-user link makes no errors") {
    SystemParams p = mai_params();
    p.n_users = 1;
    BepMonteCarloOptions opts;
    opts.trials = 64;
    opts.seed = 5;
    const auto r = bep_monte_carlo(p, CodeSet({3}), ChannelEnsembleParams{}, opts);
    CHECK(r.errors == 0);
    CHECK(r.bits == 64);
    CHECK_FALSE(r.reliable);

    opts.require_resolution = true;
    CHECK_THROWS_AS(bep_monte_carlo(p, CodeSet({3}), ChannelEnsembleParams{}, opts),
                    numerical_error);
}

TEST_CASE("monte carlo bep tracks the analytic value at SIR 16") {
    // N = 2, DSBP = 4 -> SIR = 16, analytic BEP = Q(2)
    SystemParams p;
    p.f0 = 2e9;
    p.delta_f = 0.4e9;
    p.delta_tau = 10e-9;
    p.tau0 = 10e-9;
    p.n_users = 2;
    p.fs = 6.4e9;
    p.n_fft = 4096;
    p.validate();
    BepMonteCarloOptions opts;
    opts.trials = 1500;
    opts.seed = 31;
    const auto r = bep_monte_carlo(p, CodeSet({3, -3}), ChannelEnsembleParams{}, opts);
    const double analytic = q_function(2.0);
    CHECK(r.bep > 0.5 * analytic);
    CHECK(r.bep < 2.0 * analytic);
    CHECK(r.reliable);
    CHECK(r.wilson_lo <= r.bep);
    CHECK(r.wilson_hi >= r.bep);
}

} // TEST_SUITE
