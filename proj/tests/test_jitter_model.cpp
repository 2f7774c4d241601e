#include <doctest.h>

#include <cmath>

#include "ccosim/jitter_model.hpp"

using namespace ccosim;

namespace {
jitter::JitterParams params_for(double i_tail) {
    ring::RingConfig cfg = ring::default_ring_config();
    cfg.i_tail = i_tail;
    return jitter::make_jitter_params(cfg);
}
}  // namespace

TEST_CASE("variance formula scalings") {
    auto p = params_for(0.7e-6);
    const double v0 = jitter::period_jitter_variance(p);
    auto p2 = p;
    p2.i_avg *= 2.0;
    CHECK(jitter::period_jitter_variance(p2) == doctest::Approx(v0 / 2.0).epsilon(1e-12));
    // zero noise factors eliminate the device term exactly
    p2 = p;
    p2.gamma_n = p2.gamma_p = 0.0;
    const double expect = p.k_boltzmann * p.temperature / (p.i_avg * p.f0) * 2.0 / p.vdd;
    CHECK(jitter::period_jitter_variance(p2) == doctest::Approx(expect).epsilon(1e-12));

    // strict monotonicity
    p2 = p;
    p2.temperature *= 1.3;
    CHECK(jitter::period_jitter_variance(p2) > v0);
    p2 = p;
    p2.vdd += 0.2;
    CHECK(jitter::period_jitter_variance(p2) < v0);
    p2 = p;
    p2.gamma_n *= 2.0;
    CHECK(jitter::period_jitter_variance(p2) > v0);
    p2 = p;
    p2.f0 *= 1.5;
    CHECK(jitter::period_jitter_variance(p2) < v0);
}

TEST_CASE("f0 estimate") {
    CHECK(jitter::f0_estimate(1e-6, 10e-15, 4, 1.2) == doctest::Approx(20.83e6).epsilon(1e-3));
    CHECK(jitter::f0_estimate(1e-6, 20e-15, 4, 1.2) ==
          doctest::Approx(jitter::f0_estimate(1e-6, 10e-15, 4, 1.2) / 2.0));
    CHECK(jitter::f0_estimate(1e-6, 10e-15, 8, 1.2) ==
          doctest::Approx(jitter::f0_estimate(1e-6, 10e-15, 4, 1.2) / 2.0));
}

TEST_CASE("jitter ratio prediction") {
    CHECK(jitter::jitter_ratio_prediction(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(jitter::jitter_ratio_prediction(0.75, 1.0) == doctest::Approx(0.75));
    CHECK(jitter::jitter_ratio_prediction(0.75, 0.867) == doctest::Approx(0.998).epsilon(1e-3));
}

TEST_CASE("C over I squared scaling, exact at two pairs") {
    // substituting the f0 estimate makes sigma^2 proportional to C / I^2
    auto make = [](double c, double i) {
        jitter::JitterParams p;
        p.i_avg = i;
        p.c_load = c;
        p.f0 = jitter::f0_estimate(i, c, p.n_stages, p.vdd);
        return jitter::period_jitter_variance(p);
    };
    const double base = make(6e-15, 0.8e-6);
    CHECK(make(12e-15, 0.8e-6) == doctest::Approx(2.0 * base).epsilon(1e-12));
    CHECK(make(6e-15, 0.4e-6) == doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("sampled periods: determinism and statistics") {
    ring::RingConfig cfg = ring::default_ring_config();
    auto p = params_for(cfg.i_tail);
    p.gamma_n = p.gamma_p = jitter::measured_calibration_gamma();

    const auto a = jitter::sample_periods(cfg, p, 1000, 7);
    const auto b = jitter::sample_periods(cfg, p, 1000, 7);
    CHECK(a == b);

    const auto big = jitter::sample_periods(cfg, p, 100000, 11);
    double mean = 0.0;
    for (double t : big) mean += t;
    mean /= big.size();
    double ss = 0.0;
    for (double t : big) ss += (t - mean) * (t - mean);
    const double var = ss / big.size();
    CHECK(mean == doctest::Approx(1.0 / ring::frequency(cfg)).epsilon(1e-3));
    CHECK(var == doctest::Approx(jitter::period_jitter_variance(p)).epsilon(0.03));

    // zero variance collapses to the exact period
    auto pz = p;
    pz.gamma_n = pz.gamma_p = 1e-30;
    pz.temperature = 1e-30;
    const auto z = jitter::sample_periods(cfg, pz, 10, 3);
    for (double t : z) CHECK(t == doctest::Approx(1.0 / ring::frequency(cfg)).epsilon(1e-9));
}

TEST_CASE("windowed count jitter at the calibrated point") {
    ring::RingConfig cfg = ring::default_ring_config();
    cfg.i_tail = 0.4e-6;
    const double g = jitter::measured_calibration_gamma();
    const auto p = jitter::make_jitter_params(cfg, 1.2, g, g);
    const auto stats = jitter::window_count_jitter(cfg, p, 50e-6, 2000, 42);
    CHECK(stats.percent == doctest::Approx(0.20).epsilon(0.25));  // 0.20 +- 0.05
    CHECK(stats.percent > 0.15);
    CHECK(stats.percent < 0.35);
}

TEST_CASE("windowed count: proposed and conventional agree at equal frequency") {
    ring::RingConfig prop = ring::default_ring_config();
    prop.i_tail = 0.4e-6;
    const double f = ring::frequency(prop);
    ring::RingConfig conv = prop;
    conv.topo = stage::StageTopology::Conventional8T;
    // tail current needed for the same frequency
    ring::RingConfig unit = conv;
    unit.i_tail = 1.0;
    conv.i_tail = f / ring::frequency(unit);
    CHECK(ring::frequency(conv) == doctest::Approx(f).epsilon(1e-9));

    const double g = jitter::measured_calibration_gamma();
    const auto pp = jitter::make_jitter_params(prop, 1.2, g, g);
    const auto pc = jitter::make_jitter_params(conv, 1.2, g, g);
    const auto sp = jitter::window_count_jitter(prop, pp, 50e-6, 3000, 5);
    const auto sc = jitter::window_count_jitter(conv, pc, 50e-6, 3000, 6);
    const double predicted = jitter::jitter_ratio_prediction(
        stage::load_capacitance(prop.topo, prop.caps) /
            stage::load_capacitance(conv.topo, conv.caps),
        prop.i_tail / conv.i_tail);
    const double measured_ratio = (sp.percent / sc.percent) * (sp.percent / sc.percent);
    CHECK(measured_ratio == doctest::Approx(predicted).epsilon(0.10));
    CHECK(sp.percent / sc.percent == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("count spread grows like sqrt of window") {
    ring::RingConfig cfg = ring::default_ring_config();
    cfg.i_tail = 0.4e-6;
    const double g = jitter::measured_calibration_gamma();
    const auto p = jitter::make_jitter_params(cfg, 1.2, g, g);
    const auto s1 = jitter::window_count_jitter(cfg, p, 25e-6, 3000, 9);
    const auto s4 = jitter::window_count_jitter(cfg, p, 100e-6, 3000, 9);
    // absolute count std scales like sqrt(window)
    CHECK(s4.stddev / s1.stddev == doctest::Approx(2.0).epsilon(0.12));
}

TEST_CASE("zero variance gives zero percent") {
    ring::RingConfig cfg = ring::default_ring_config();
    auto p = params_for(cfg.i_tail);
    p.temperature = 1e-30;
    const auto stats = jitter::window_count_jitter(cfg, p, 50e-6, 100, 1);
    CHECK(stats.percent == doctest::Approx(0.0).epsilon(1e-12));
}
