#include <doctest.h>

#include <cmath>

#include "ccosim/neuron.hpp"

using namespace ccosim;

namespace {

// synthetic piecewise-linear curves with a known break
variation::Curve make_curve(std::span<const double> currents, double m1, double m2, double b) {
    variation::Curve c;
    for (double i : currents) c.emplace_back(i, (i < b ? m1 : m2) * i);
    return c;
}

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
    return g;
}

}  // namespace

TEST_CASE("rate response") {
    ring::RingConfig cfg = ring::default_ring_config();
    CHECK(neuron::rate_response(0.0, 50e-6, cfg) == 0);

    const double window = 50e-6;
    long prev = 0;
    for (int k = 1; k <= 100; ++k) {
        const double i = k * 1.45e-8;
        const long count = neuron::rate_response(i, window, cfg);
        CHECK(count >= prev);  // monotone in the input current
        prev = count;
        if (k % 25 == 0) {
            ring::RingConfig c = cfg;
            c.i_tail = i;
            const double expect = 8.0 * ring::frequency(c) * window;
            CHECK(std::abs(count - expect) <= 1.0 + 1e-6);
        }
    }
}

TEST_CASE("mean slope fit") {
    const auto g = grid(0.1e-6, 1.5e-6, 12);
    const variation::Curve one = make_curve(g, 5e13, 5e13, 1.0);
    CHECK(neuron::fit_mean_slope(std::vector<variation::Curve>{one}) == doctest::Approx(5e13));
    const variation::Curve three = make_curve(g, 15e13, 15e13, 1.0);
    CHECK(neuron::fit_mean_slope(std::vector<variation::Curve>{one, three}) == doctest::Approx(10e13));

    variation::Curve degenerate{{1e-6, 5e7}};
    CHECK_THROWS(neuron::fit_mean_slope(std::vector<variation::Curve>{degenerate}));
}

TEST_CASE("two-region fit recovers a synthetic break") {
    const auto g = grid(0.1e-6, 1.5e-6, 15);
    const double b_true = g[8] + 1e-9;  // between grid points 8 and 9
    std::vector<variation::Curve> curves;
    for (double wob : {0.98, 1.0, 1.02})
        curves.push_back(make_curve(g, 5e13 * wob, 3.5e13 * wob, b_true));
    const auto fit = neuron::fit_two_region(curves, g);
    // recovered within one grid step
    CHECK(std::abs(fit.boundary - b_true) <= (g[1] - g[0]) + 1e-12);
    CHECK(fit.mu1 == doctest::Approx(5e13).epsilon(0.05));
    CHECK(fit.mu2 == doctest::Approx(3.5e13).epsilon(0.08));
}

TEST_CASE("two-region fit edge cases") {
    const auto g = grid(0.1e-6, 1.5e-6, 12);
    SUBCASE("exactly linear curves tie-break to the smallest boundary") {
        const std::vector<variation::Curve> curves{make_curve(g, 5e13, 5e13, 1.0)};
        const auto fit = neuron::fit_two_region(curves, g);
        // smallest candidate keeping 3 points below is g[3]
        CHECK(fit.boundary == doctest::Approx(g[3]));
        CHECK(fit.mse == doctest::Approx(0.0));
    }
    SUBCASE("zero-noise single curve has zero sigmas") {
        const std::vector<variation::Curve> curves{make_curve(g, 5e13, 4e13, g[6] + 1e-9)};
        const auto fit = neuron::fit_two_region(curves, g);
        CHECK(fit.sigma1 == doctest::Approx(0.0));
        CHECK(fit.sigma2 == doctest::Approx(0.0));
    }
    SUBCASE("no feasible candidate") {
        const auto small = grid(0.1e-6, 1.5e-6, 4);
        const std::vector<variation::Curve> curves{make_curve(small, 5e13, 5e13, 1.0)};
        CHECK_THROWS(neuron::fit_two_region(curves, small));
    }
}

TEST_CASE("activation extraction normalizes") {
    const auto g = grid(0.1e-6, 1.5e-6, 15);
    std::vector<variation::Curve> curves;
    for (double wob : {0.95, 1.0, 1.05}) curves.push_back(make_curve(g, 5e13 * wob, 4e13 * wob, g[9]));
    const auto model = neuron::extract_activation(curves, 0.002);
    CHECK(model.boundary == doctest::Approx(g[9] / g.back()).epsilon(0.1));
    CHECK(model.mu1 == doctest::Approx(5e13 / model.mean_slope).epsilon(0.05));
    CHECK(model.jitter_sigma == 0.002);
    // round trip through json
    const auto back = neuron::ActivationModel::from_json(model.to_json());
    CHECK(back.mu1 == doctest::Approx(model.mu1));
    CHECK(back.boundary == doctest::Approx(model.boundary));
}

TEST_CASE("custom activation formula") {
    neuron::ActivationModel m;
    m.boundary = 0.5;
    neuron::NeuronSlopes s{1.2, 0.8};
    // x <= 0 with zero noise dies at the rectifier
    CHECK(neuron::custom_activation(-1.0, m, s, 0.0) == 0.0);
    CHECK(neuron::custom_activation(0.0, m, s, 0.0) == 0.0);
    // region selection
    CHECK(neuron::custom_activation(0.3, m, s, 0.0) == doctest::Approx(1.2 * 0.3));
    CHECK(neuron::custom_activation(0.7, m, s, 0.0) == doctest::Approx(0.8 * 0.7));
    CHECK(neuron::custom_activation(0.5, m, s, 0.0) == doctest::Approx(0.8 * 0.5));  // B in region 2
    // noise multiplies the pre-rectifier value
    CHECK(neuron::custom_activation(0.7, m, s, 0.1) == doctest::Approx(0.8 * 0.7 * 1.1));
    // n < -1 can push the output negative; the optional clamp clips it
    CHECK(neuron::custom_activation(0.7, m, s, -1.5) < 0.0);
    m.clamp_negative = true;
    CHECK(neuron::custom_activation(0.7, m, s, -1.5) == 0.0);
}

TEST_CASE("identity parameters reduce to relu pointwise") {
    const auto m = neuron::ActivationModel::identity();
    const neuron::NeuronSlopes s{1.0, 1.0};
    for (double x : {-2.0, -0.3, 0.0, 0.2, 0.5, 0.9, 3.0})
        CHECK(neuron::custom_activation(x, m, s, 0.0) == std::max(x, 0.0));
}

TEST_CASE("slope draws: zero sigma skips the stream") {
    neuron::ActivationModel m;
    m.sigma1 = m.sigma2 = 0.0;
    RngStream rng(1, "test.slopes");
    const uint64_t before = rng.next_u64();
    RngStream rng2(1, "test.slopes");
    (void)rng2.next_u64();
    const auto s = neuron::draw_slopes(m, rng2);
    CHECK(s.m1 == m.mu1);
    CHECK(s.m2 == m.mu2);
    CHECK(rng2.next_u64() != before);  // stream advanced only by our explicit draws
}

TEST_CASE("spiking: leak threshold") {
    ring::RingConfig cfg = ring::default_ring_config();
    neuron::SpikingConfig scfg;
    const std::vector<neuron::CurrentSegment> below{{0.0, 0.5e-9}};
    CHECK(neuron::spiking_response(below, 100e-6, scfg, cfg).empty());
    const std::vector<neuron::CurrentSegment> zero{{0.0, 0.0}};
    CHECK(neuron::spiking_response(zero, 100e-6, scfg, cfg).empty());
    const std::vector<neuron::CurrentSegment> above{{0.0, 10e-9}};
    CHECK(!neuron::spiking_response(above, 100e-6, scfg, cfg).empty());
}

TEST_CASE("spiking: step-confined firing") {
    ring::RingConfig cfg = ring::default_ring_config();
    neuron::SpikingConfig scfg;
    const double t0 = 10e-6, t1 = 60e-6;
    const std::vector<neuron::CurrentSegment> wave{{0.0, 0.0}, {t0, 1e-6}, {t1, 0.0}};
    const auto spikes = neuron::spiking_response(wave, 100e-6, scfg, cfg);
    REQUIRE(!spikes.empty());
    const double period = neuron::cycle_charge(cfg) / (1e-6 - scfg.i_leak);
    CHECK(spikes.front() >= t0);
    CHECK(spikes.back() <= t1 + period);
    // spike count matches the integrated drive
    const double expect = (1e-6 - scfg.i_leak) * (t1 - t0) / neuron::cycle_charge(cfg);
    CHECK(std::abs(spikes.size() - expect) <= 1.0);
}

TEST_CASE("spiking: four pulses per output spike at the derived charge") {
    ring::RingConfig cfg = ring::default_ring_config();
    neuron::SpikingConfig scfg;  // pulse_charge 0 -> q_cycle / 4
    std::vector<double> pulses;
    for (int k = 0; k < 16; ++k) pulses.push_back(1e-6 * (k + 1));
    const auto spikes = neuron::spiking_response_pulses(pulses, 1e-3, scfg, cfg);
    REQUIRE(spikes.size() == 4);
    // spikes land on every 4th pulse
    CHECK(spikes[0] == doctest::Approx(pulses[3]));
    CHECK(spikes[1] == doctest::Approx(pulses[7]));
    CHECK(spikes[2] == doctest::Approx(pulses[11]));
    CHECK(spikes[3] == doctest::Approx(pulses[15]));
}
