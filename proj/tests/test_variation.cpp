#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ccosim/variation.hpp"

using namespace ccosim;

TEST_CASE("mismatch model validation") {
    variation::MismatchModel m;
    CHECK_NOTHROW(m.validate());
    CHECK(m.cv == doctest::Approx(0.0453).epsilon(1e-2));
    m.cv = 0.06;  // no longer sigma/mean
    CHECK_THROWS(m.validate());
}

TEST_CASE("slope scale draws") {
    variation::MismatchModel m;
    SUBCASE("zero sigma returns the means") {
        m.sigma1_rel = m.sigma2_rel = 0.0;
        m.mu1_rel = 1.05;
        m.mu2_rel = 0.95;
        const auto s = variation::sample_slope_scale(m, uint64_t{1});
        CHECK(s.m1 == 1.05);
        CHECK(s.m2 == 0.95);
    }
    SUBCASE("deterministic per seed") {
        const auto a = variation::sample_slope_scale(m, uint64_t{42});
        const auto b = variation::sample_slope_scale(m, uint64_t{42});
        CHECK(a.m1 == b.m1);
        CHECK(a.m2 == b.m2);
        const auto c = variation::sample_slope_scale(m, uint64_t{43});
        CHECK(a.m1 != c.m1);
    }
    SUBCASE("draws are positive") {
        m.sigma1_rel = 0.5;  // heavy spread forces rejections
        m.cv = m.sigma_f_ref / m.mean_f_ref;
        RngStream rng(9, "test");
        for (int k = 0; k < 2000; ++k) CHECK(variation::sample_slope_scale(m, rng).m1 > 0.0);
    }
}

TEST_CASE("reference-current spread reproduces the configured cv") {
    variation::MismatchModel m;
    RngStream rng(2718, "test.cv");
    const int n = 2000;
    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) {
        const auto s = variation::sample_slope_scale(m, rng);
        f[k] = m.mean_f_ref * (m.i_ref < m.knee ? s.m1 : s.m2);
    }
    double mean = 0.0;
    for (double x : f) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : f) ss += (x - mean) * (x - mean);
    const double cv = std::sqrt(ss / n) / mean;
    CHECK(std::abs(cv - m.cv) < 0.005);  // within half a point of the configured cv
}

TEST_CASE("mc curves: nominal reduction and ensemble mean") {
    ring::RingConfig cfg = ring::default_ring_config();
    std::vector<double> currents;
    for (int k = 0; k < 20; ++k) currents.push_back(0.1e-6 + k * (1.4e-6 / 19));

    variation::MismatchModel m;
    SUBCASE("single zero-sigma run equals the nominal curve") {
        m.sigma1_rel = m.sigma2_rel = 0.0;
        const auto runs = variation::mc_if_curves(cfg, m, 1, currents, 7);
        const auto nominal = ring::if_curve(cfg, currents);
        REQUIRE(runs.size() == 1);
        for (size_t k = 0; k < currents.size(); ++k)
            CHECK(runs[0][k].second == doctest::Approx(nominal[k].second).epsilon(1e-12));
    }
    SUBCASE("ensemble mean tracks the nominal curve") {
        const auto runs = variation::mc_if_curves(cfg, m, 2000, currents, 11);
        const auto nominal = ring::if_curve(cfg, currents);
        for (size_t k = 0; k < currents.size(); ++k) {
            double mean = 0.0;
            for (const auto& c : runs) mean += c[k].second;
            mean /= runs.size();
            CHECK(std::abs(mean - nominal[k].second) / nominal[k].second < 0.01);
        }
    }
    SUBCASE("normality of the reference-current histogram") {
        const auto runs = variation::mc_if_curves(cfg, m, 2000, currents, 13);
        // Jarque-Bera on frequencies at the swept point nearest i_ref
        size_t ref_idx = 0;
        for (size_t k = 0; k < currents.size(); ++k)
            if (std::abs(currents[k] - m.i_ref) < std::abs(currents[ref_idx] - m.i_ref))
                ref_idx = k;
        std::vector<double> f(runs.size());
        for (size_t k = 0; k < runs.size(); ++k) f[k] = runs[k][ref_idx].second;
        const double n = static_cast<double>(f.size());
        double mean = 0.0;
        for (double x : f) mean += x;
        mean /= n;
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (double x : f) {
            const double d = x - mean;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
        m2 /= n;
        m3 /= n;
        m4 /= n;
        const double skew = m3 / std::pow(m2, 1.5);
        const double kurt = m4 / (m2 * m2) - 3.0;
        const double jb = n / 6.0 * (skew * skew + kurt * kurt / 4.0);
        CHECK(jb < 9.21);  // chi2(2) critical value at alpha = 0.01
    }
}

TEST_CASE("common-mode slope scaling leaves the argmax invariant") {
    // a layer sharing one scale factor keeps its winner
    const std::vector<double> outputs = {0.3, 1.7, 0.9, 1.1};
    const auto argmax = std::max_element(outputs.begin(), outputs.end()) - outputs.begin();
    for (double scale : {0.5, 0.9, 1.3}) {
        std::vector<double> scaled(outputs.size());
        for (size_t k = 0; k < outputs.size(); ++k) scaled[k] = outputs[k] * scale;
        CHECK(std::max_element(scaled.begin(), scaled.end()) - scaled.begin() == argmax);
    }
}

TEST_CASE("supply perturbation sampling") {
    variation::SupplyPerturbation p;
    SUBCASE("zero std returns the mean") {
        p.std_pct = 0.0;
        CHECK(variation::sample_supply_perturbation(p, uint64_t{3}) == doctest::Approx(-0.78));
    }
    SUBCASE("temperature term defaults to zero effect") {
        variation::SupplyPerturbation with_temp = p;
        RngStream a(5, "t"), b(5, "t");
        const double base = variation::sample_supply_perturbation(p, a);
        CHECK(variation::sample_supply_perturbation(with_temp, b) == base);
        with_temp.temp_mean_pct = -0.5;
        RngStream c(5, "t");
        CHECK(variation::sample_supply_perturbation(with_temp, c) ==
              doctest::Approx(base - 0.5).epsilon(1e-12));
    }
    SUBCASE("large-sample mean and clamping") {
        RngStream rng(31, "test.supply");
        double sum = 0.0;
        const int n = 100000;
        for (int k = 0; k < n; ++k) {
            const double v = variation::sample_supply_perturbation(p, rng);
            CHECK(v >= -0.78 - 3.0 * 1.74 - 1e-12);
            CHECK(v <= -0.78 + 3.0 * 1.74 + 1e-12);
            sum += v;
        }
        CHECK(sum / n == doctest::Approx(-0.78).epsilon(0.03));
    }
}
