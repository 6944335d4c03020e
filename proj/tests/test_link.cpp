#include <doctest.h>

#include <cmath>
#include <complex>

#include "dcma/errors.hpp"
#include "dcma/link.hpp"
#include "oracles.hpp"

using namespace dcma;

namespace {

SystemParams params(int n_users = 2, double dtau = 1e-9, double df = 4e9,
                    std::size_t nfft = 4096) {
    SystemParams p;
    p.f0 = 10e9;
    p.delta_f = df;
    p.delta_tau = dtau;
    p.tau0 = dtau;
    p.n_users = n_users;
    p.fs = 32e9;
    p.n_fft = nfft;
    p.validate();
    return p;
}

std::vector<BitStream> trains(const SystemParams& p, const std::vector<std::vector<int>>& bits) {
    std::vector<BitStream> out;
    out.reserve(bits.size());
    for (const auto& b : bits) out.emplace_back(b, p);
    return out;
}

} // namespace

TEST_SUITE("link") {

TEST_CASE("bit stream validation") {
    const auto p = params();
    CHECK(BitStream({1, 0, 1}, p).t_b == doctest::Approx(2.0 * p.delta_tau));
    CHECK_THROWS_AS(BitStream({}, p), config_error);
    CHECK_THROWS_AS(BitStream({0, 2}, p), config_error);
}

TEST_CASE("ook train spectra") {
    const auto p = params();
    const auto g = make_grid(p);
    SUBCASE("single 1 bit at t_tx = 0 is the all-ones spectrum") {
        const auto s = ook_dirac_train(BitStream({1}, p), 1.0, 0.0, g);
        for (const auto& v : s.values) CHECK(std::abs(v - std::complex<double>{1.0, 0.0}) < 1e-15);
    }
    SUBCASE("a 0 bit contributes nothing") {
        const auto s = ook_dirac_train(BitStream({0}, p), 1.0, 0.0, g);
        for (const auto& v : s.values) CHECK(std::abs(v) == 0.0);
    }
    SUBCASE("[1,1] decodes to two pulses one bit period apart") {
        const auto s = ook_dirac_train(BitStream({1, 1}, p), 1.0, 0.0, g);
        const auto casc = cascaded_transfer(ChebyshevCode(3), ChebyshevCode(3), p, g);
        const auto w = normalize(impulse_response(apply(s, casc), p), p);
        const auto peaks = sample_waveform(w, {2.0 * p.tau0, 2.0 * p.tau0 + p.bit_period()});
        CHECK(std::abs(peaks[0]) == doctest::Approx(1.0).epsilon(5e-3));
        CHECK(std::abs(peaks[1]) == doctest::Approx(1.0).epsilon(5e-3));
    }
    SUBCASE("train that does not fit the window overflows") {
        std::vector<int> big(70, 1);   // 70 bits * 2 ns > 128 ns window
        CHECK_THROWS_AS(ook_dirac_train(BitStream(big, p), 1.0, 0.0, g), window_overflow_error);
    }
    SUBCASE("amplitude must be positive") {
        CHECK_THROWS_AS(ook_dirac_train(BitStream({1}, p), 0.0, 0.0, g), domain_error);
    }
}

TEST_CASE("dook modulation") {
    CHECK(dook_modulate({1, 1, 1}, 5e-9, 3e-9) == std::vector<double>{0.0});
    CHECK(dook_modulate({1, 0, 1, 0}, 5e-9, 3e-9) ==
          std::vector<double>{0.0, 5e-9, 10e-9, 15e-9});
    CHECK(dook_modulate({0, 0}, 5e-9, 3e-9).empty());
    // a representative NRZ pattern: one pulse per level change
    const auto pulses = dook_modulate({1, 1, 0, 1, 0, 0, 1}, 5e-9, 3e-9);
    CHECK(pulses == std::vector<double>{0.0, 10e-9, 15e-9, 20e-9, 30e-9});
    CHECK_THROWS_AS(dook_modulate({1, 0}, 5e-9, 5e-9), domain_error);
    CHECK_THROWS_AS(dook_modulate({1, 0}, 5e-9, 0.0), domain_error);
    CHECK_THROWS_AS(dook_modulate({2}, 5e-9, 3e-9), domain_error);
}

TEST_CASE("matched single-user link peaks at one") {
    const auto p = params(1);
    const CodeSet codes({3});
    const auto link = simulate_link(p, codes, ChannelRealization::identity(1),
                                    trains(p, {{1}}), 0, nullptr);
    const auto peak = sample_waveform(link.z, {2.0 * p.tau0});
    CHECK(peak[0].real() == doctest::Approx(1.0).epsilon(5e-3));
    for (std::size_t s = 0; s < link.x_mai.size(); ++s) CHECK(std::abs(link.x_mai.samples[s]) == 0.0);
}

TEST_CASE("synchronized shorted 2x2 reproduces the per-pair impulse responses") {
    const auto p = params(2);
    const CodeSet codes({1, -1});
    const auto g = make_grid(p);
    const auto link = simulate_link(p, codes, ChannelRealization::identity(2),
                                    trains(p, {{1}, {1}}), 0, nullptr);

    const auto s_ref = normalize(impulse_response(
        cascaded_transfer(ChebyshevCode(1), ChebyshevCode(1), p, g), p), p);
    const auto x_ref = normalize(impulse_response(
        cascaded_transfer(ChebyshevCode(1), ChebyshevCode(-1), p, g), p), p);
    for (std::size_t s = 0; s < g.size(); ++s) {
        CHECK(std::abs(link.s_tilde.samples[s] - s_ref.samples[s]) < 1e-12);
        CHECK(std::abs(link.x_mai.samples[s] - x_ref.samples[s]) < 1e-12);
    }
}

TEST_CASE("decomposition: z = s_tilde + x_mai + noise exactly") {
    auto p = params(2);
    p.noise_sigma = 0.3;
    const CodeSet codes({3, -3});
    StreamRng rng(5, 0);
    StreamRng chan_rng(6, 0);
    ChannelEnsembleParams ens;
    const auto chan = draw_realization(p, ens, chan_rng);
    const auto link =
        simulate_link(p, codes, chan, trains(p, {{1, 0, 1}, {0, 1, 1}}), 0, &rng);
    for (std::size_t s = 0; s < link.z.size(); ++s) {
        const auto sum = link.s_tilde.samples[s] + link.x_mai.samples[s] + link.noise.samples[s];
        CHECK(std::abs(link.z.samples[s] - sum) == 0.0);
    }
}

TEST_CASE("superposition of single-transmitter runs equals the joint run") {
    const auto p = params(3, 1e-9, 4e9);
    const CodeSet codes({3, -3, 5});
    StreamRng chan_rng(11, 0);
    ChannelEnsembleParams ens;
    ens.alpha_min_sq = 0.5;
    ens.alpha_max_sq = 1.5;
    const auto chan = draw_realization(p, ens, chan_rng);
    const std::vector<std::vector<int>> bits{{1, 0, 1}, {1, 1, 0}, {0, 1, 1}};

    const auto joint = simulate_link(p, codes, chan, trains(p, bits), 0, nullptr);

    std::vector<std::complex<double>> acc(p.n_fft, {0.0, 0.0});
    for (int k = 1; k < 3; ++k) {
        auto solo = bits;
        for (int other = 1; other < 3; ++other)
            if (other != k) solo[static_cast<std::size_t>(other)].assign(bits[0].size(), 0);
        const auto run = simulate_link(p, codes, chan, trains(p, solo), 0, nullptr);
        for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += run.x_mai.samples[s];
    }
    for (std::size_t s = 0; s < acc.size(); ++s)
        CHECK(std::abs(acc[s] - joint.x_mai.samples[s]) < 1e-10);
}

TEST_CASE("periodic worst-case MAI repeats with the bit period") {
    const auto p = params(2, 1e-9, 4e9, 4096);   // window = 64 bits
    const CodeSet codes({3, -3});
    StreamRng chan_rng(7, 3);
    ChannelEnsembleParams ens;
    const auto chan = draw_realization(p, ens, chan_rng);
    const auto n_bits = static_cast<std::size_t>(p.window_s() / p.bit_period() + 0.5);
    LinkOptions opts;
    opts.periodic = true;
    opts.worst_case_interferers = true;
    const auto link = simulate_link(p, codes, chan,
                                    trains(p, {std::vector<int>(n_bits, 0),
                                               std::vector<int>(n_bits, 1)}),
                                    0, nullptr, opts);
    const auto spb = static_cast<std::size_t>(p.bit_period() * p.fs + 0.5);
    double worst = 0.0, scale = 0.0;
    for (std::size_t s = 0; s < link.x_mai.size(); ++s) {
        const auto next = (s + spb) % link.x_mai.size();
        worst = std::max(worst, std::abs(link.x_mai.samples[s] - link.x_mai.samples[next]));
        scale = std::max(scale, std::abs(link.x_mai.samples[s]));
    }
    CHECK(worst < 1e-9 * scale + 1e-12);
}

TEST_CASE("noise-only link has the expected normalized variance") {
    auto p = params(1);
    p.noise_sigma = 2.5;
    const CodeSet codes({3});
    StreamRng rng(21, 0);
    double acc = 0.0;
    std::size_t count = 0;
    for (int rep = 0; rep < 8; ++rep) {
        const auto link = simulate_link(p, codes, ChannelRealization::identity(1),
                                        trains(p, {{0}}), 0, &rng);
        for (std::size_t s = 0; s < link.z.size(); ++s) {
            acc += link.z.samples[s].real() * link.z.samples[s].real();
            ++count;
        }
    }
    const double expect = p.noise_sigma * p.noise_sigma / (4.0 * p.delta_f * p.delta_f);
    CHECK(acc / static_cast<double>(count) == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("window overflow and dimension checks") {
    const auto p = params(2);
    const CodeSet codes({3, -3});
    SUBCASE("aperiodic train too long") {
        std::vector<int> big(64, 1);   // fills the window; tau0 pushes it over
        CHECK_THROWS_AS(simulate_link(p, codes, ChannelRealization::identity(2),
                                      trains(p, {big, big}), 0, nullptr),
                        window_overflow_error);
    }
    SUBCASE("wrong channel dimension") {
        CHECK_THROWS_AS(simulate_link(p, codes, ChannelRealization::identity(3),
                                      trains(p, {{1}, {1}}), 0, nullptr),
                        config_error);
    }
    SUBCASE("rx index out of range") {
        CHECK_THROWS_AS(simulate_link(p, codes, ChannelRealization::identity(2),
                                      trains(p, {{1}, {1}}), 2, nullptr),
                        config_error);
    }
    SUBCASE("periodic mode needs an integer number of bits") {
        LinkOptions opts;
        opts.periodic = true;
        CHECK_THROWS_AS(simulate_link(p, codes, ChannelRealization::identity(2),
                                      trains(p, {{1, 1}, {1, 1}}), 0, nullptr, opts),
                        config_error);
    }
}

TEST_CASE("a channel ray delays the matched peak and scales it") {
    const auto p = params(1);
    const CodeSet codes({5});
    auto chan = ChannelRealization::identity(1);
    chan.t_chan[0] = 1.7e-9;
    auto link = simulate_link(p, codes, chan, trains(p, {{1}}), 0, nullptr);
    const auto at_shifted = sample_waveform(link.z, {2.0 * p.tau0 + 1.7e-9});
    CHECK(std::abs(at_shifted[0]) == doctest::Approx(1.0).epsilon(5e-3));

    // alpha = 0.5 on an interfering link halves the decoded MAI
    const auto p2 = params(2);
    const CodeSet codes2({3, -3});
    auto chan2 = ChannelRealization::identity(2);
    chan2.alpha[1] = 0.5;   // link (rx 0, tx 1)
    const auto full = simulate_link(p2, codes2, ChannelRealization::identity(2),
                                    trains(p2, {{1}, {1}}), 0, nullptr);
    const auto half = simulate_link(p2, codes2, chan2, trains(p2, {{1}, {1}}), 0, nullptr);
    for (std::size_t s = 0; s < full.x_mai.size(); s += 17)
        CHECK(std::abs(half.x_mai.samples[s] - 0.5 * full.x_mai.samples[s]) < 1e-12);
}

TEST_CASE("clean threshold detection recovers the bits") {
    const auto p = params(1);
    const CodeSet codes({3});
    const auto link = simulate_link(p, codes, ChannelRealization::identity(1),
                                    trains(p, {{1, 0, 1}}), 0, nullptr);
    std::vector<double> timing;
    for (int l = 0; l < 3; ++l) timing.push_back(2.0 * p.tau0 + l * p.bit_period());
    CHECK(detect_bits(link, 0.5, timing) == std::vector<int>{1, 0, 1});

    CHECK_THROWS_AS(detect_bits(link, 0.0, timing), domain_error);
    CHECK_THROWS_AS(detect_bits(link, 0.5, {p.window_s() * 1.5}), domain_error);
}

} // TEST_SUITE
