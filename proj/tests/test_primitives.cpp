#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "replikit/primitives.hpp"
#include "replikit/sources.hpp"

using namespace replikit;

namespace {

// label sampler over explicit masses
struct MassSampler {
    std::vector<double> cumulative;
    RngStream* rng;
    std::size_t operator()() {
        double u = rng->next_double();
        std::size_t i = 0;
        while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
        return i;
    }
};

}  // namespace

TEST_CASE("heavy hitters on a point mass") {
    HHParams params;
    params.v = 0.5;
    params.eps = 0.1;
    params.rho = 0.2;
    params.delta = 0.05;
    params.budget_scale = 1e-4;
    RngStream internal = SharedRandomness(1).child("hh").stream();
    auto draw = []() { return 7; };
    auto out = r_heavy_hitters<int>(draw, params, internal);
    CHECK(out == std::vector<int>{7});
}

TEST_CASE("heavy hitters separates 0.5 from <= v-eps masses") {
    HHParams params;
    params.v = 0.45;
    params.eps = 0.1;
    params.rho = 0.2;
    params.delta = 0.05;
    params.budget_scale = 2e-4;
    RngStream data = SharedRandomness(2).child("data").stream();
    MassSampler draw{{0.5, 0.8, 1.0}, &data};

    int ok = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        RngStream internal = SharedRandomness(100 + t).child("hh").stream();
        auto out = r_heavy_hitters<std::size_t>(draw, params, internal);
        if (out == std::vector<std::size_t>{0}) ++ok;
    }
    // rate >= 1 - delta - 3 sigma
    double sigma = std::sqrt(0.05 * 0.95 / trials);
    CHECK(static_cast<double>(ok) / trials >= 1.0 - params.delta - 3.0 * sigma);
}

TEST_CASE("heavy hitters paired executions agree") {
    HHParams params;
    params.v = 0.4;
    params.eps = 0.1;
    params.rho = 0.2;
    params.delta = 0.05;
    params.budget_scale = 2e-4;
    RngStream data = SharedRandomness(3).child("data").stream();
    MassSampler draw{{0.5, 1.0 - 1e-6, 1.0}, &data};

    int match = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        SharedRandomness internal(500 + t);
        RngStream ia = internal.child("hh").stream();
        RngStream ib = internal.child("hh").stream();
        auto a = r_heavy_hitters<std::size_t>(draw, params, ia);
        auto b = r_heavy_hitters<std::size_t>(draw, params, ib);
        if (a == b) ++match;
    }
    double sigma = std::sqrt(0.2 * 0.8 / trials);
    CHECK(static_cast<double>(match) / trials >= 1.0 - params.rho - 3.0 * sigma);
}

TEST_CASE("heavy hitter budgets match the stated formulas") {
    HHParams params;
    params.v = 0.45;
    params.eps = 0.1;
    params.rho = 0.2;
    params.delta = 0.05;
    // candidate phase: ceil(ln(2/(delta (v-eps))) / (v-eps))
    CHECK(params.candidate_samples() ==
          static_cast<std::size_t>(std::ceil(std::log(2.0 / (0.05 * 0.35)) / 0.35)));
    // estimation phase: ceil((648 ln(2/delta) + 648 (|X|+1) ln 2) / (rho^2 eps^2))
    CHECK(params.estimate_samples(3) ==
          static_cast<std::size_t>(std::ceil(
              (648.0 * std::log(2.0 / 0.05) + 648.0 * 4.0 * std::log(2.0)) / (0.04 * 0.01))));
}

TEST_CASE("budget formulas are monotone in eps, rho, delta") {
    HHParams base;
    base.v = 0.45;
    base.eps = 0.1;
    base.rho = 0.2;
    base.delta = 0.05;
    for (double f : {1.2, 1.5, 2.0}) {
        HHParams easier = base;
        easier.eps = base.eps * f;
        CHECK(easier.estimate_samples(4) <= base.estimate_samples(4));
        easier = base;
        easier.rho = base.rho * f;
        CHECK(easier.estimate_samples(4) <= base.estimate_samples(4));
        easier = base;
        easier.delta = std::min(base.delta * f, 0.095);  // keep 2*delta < rho
        CHECK(easier.estimate_samples(4) <= base.estimate_samples(4));
        CHECK(easier.candidate_samples() <= base.candidate_samples());
    }
}

TEST_CASE("r_round interval arithmetic") {
    RoundingParams params{0.1, 0.2, 0.05};
    const double alpha = params.alpha();
    CHECK(alpha == doctest::Approx(2.0 * 0.1 / (0.2 + 1.0 - 0.1)));
    CHECK(params.eps_prime() == doctest::Approx(0.1 * (0.2 - 0.1) / (0.2 + 1.0 - 0.1)));

    // reproduce the offset with a cloned stream, then verify the midpoint rule
    RngStream probe = SharedRandomness(42).child("round").stream();
    double offset = probe.next_uniform(0.0, alpha);
    RngStream rng = SharedRandomness(42).child("round").stream();
    double g = 0.37;
    double out = r_round({g}, params, rng)[0];
    double z = std::floor((g - offset) / alpha);
    CHECK(out == offset + (z + 0.5) * alpha);
    CHECK(std::abs(out - g) <= alpha / 2.0);

    // a value already at an interval midpoint is a fixed point
    double mid = offset + (z + 0.5) * alpha;
    RngStream rng2 = SharedRandomness(42).child("round").stream();
    CHECK(r_round({mid}, params, rng2)[0] == mid);
}

TEST_CASE("r_round never moves a value by more than alpha/2") {
    RoundingParams params{0.05, 0.3, 0.01};
    RngStream rng = SharedRandomness(6).child("round").stream();
    RngStream vals = SharedRandomness(7).child("vals").stream();
    for (int t = 0; t < 10000; ++t) {
        double g = vals.next_uniform(-2.0, 2.0);
        double out = r_round({g}, params, rng)[0];
        CHECK(std::abs(out - g) <= params.alpha() / 2.0 + 1e-15);
    }
}

TEST_CASE("r_round split rate matches the crossing probability") {
    RoundingParams params{0.1, 0.2, 0.05};
    const double gap = 0.002;
    int splits = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        SharedRandomness internal(9000 + t);
        RngStream ra = internal.child("round").stream();
        RngStream rb = internal.child("round").stream();
        if (r_round({0.370}, params, ra)[0] != r_round({0.372}, params, rb)[0]) ++splits;
    }
    CHECK(static_cast<double>(splits) / trials <= 2.0 * gap / params.alpha());
}

TEST_CASE("r_mass_estimate with one label is forced to (1)") {
    RngStream internal = SharedRandomness(8).child("mass").stream();
    auto draw = []() -> std::size_t { return 0; };
    auto p = r_mass_estimate(draw, 1, 0.1, 0.2, 0.05, internal, 1e-3);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == 1.0);
}

TEST_CASE("r_mass_estimate accuracy on a binomial") {
    RngStream data = SharedRandomness(10).child("data").stream();
    int ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        RngStream internal = SharedRandomness(7000 + t).child("mass").stream();
        auto draw = [&]() -> std::size_t { return data.next_double() < 0.7 ? 0 : 1; };
        auto p = r_mass_estimate(draw, 2, 0.1, 0.2, 0.05, internal, 1e-2);
        if (std::abs(p[0] - 0.7) <= 0.1 && std::abs(p[1] - 0.3) <= 0.1) ++ok;
    }
    double sigma = std::sqrt(0.05 * 0.95 / trials);
    CHECK(static_cast<double>(ok) / trials >= 1.0 - 0.05 - 3.0 * sigma);
}

TEST_CASE("r_mass_estimate always returns an exact probability vector") {
    RngStream data = SharedRandomness(11).child("data").stream();
    for (int t = 0; t < 50; ++t) {
        RngStream internal = SharedRandomness(8000 + t).child("mass").stream();
        auto draw = [&]() { return data.next_index(8); };
        auto p = r_mass_estimate(draw, 8, 0.05, 0.2, 0.05, internal, 1e-3);
        double sum = 0.0;
        for (double x : p) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("r_mass_estimate paired executions agree") {
    RngStream data = SharedRandomness(12).child("data").stream();
    int match = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        SharedRandomness internal(9500 + t);
        auto draw = [&]() { return data.next_index(8); };
        RngStream ra = internal.child("mass").stream();
        auto pa = r_mass_estimate(draw, 8, 0.1, 0.2, 0.05, ra, 1e-2);
        RngStream rb = internal.child("mass").stream();
        auto pb = r_mass_estimate(draw, 8, 0.1, 0.2, 0.05, rb, 1e-2);
        if (pa == pb) ++match;
    }
    double sigma = std::sqrt(0.2 * 0.8 / trials);
    CHECK(static_cast<double>(match) / trials >= 1.0 - 0.2 - 3.0 * sigma);
}

TEST_CASE("r_sq on a constant statistic") {
    RngStream internal = SharedRandomness(13).child("sq").stream();
    auto q = []() { return 0.5; };
    double est = r_sq(q, 0.05, 0.2, 0.05, internal, 1e-2);
    CHECK(std::abs(est - 0.5) <= 0.05);
}

TEST_CASE("r_sq on a Bernoulli mean") {
    RngStream data = SharedRandomness(14).child("data").stream();
    int ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        RngStream internal = SharedRandomness(9900 + t).child("sq").stream();
        auto q = [&]() { return data.next_double() < 0.3 ? 1.0 : 0.0; };
        double est = r_sq(q, 0.05, 0.2, 0.05, internal);
        if (est >= 0.25 && est <= 0.35) ++ok;
    }
    double sigma = std::sqrt(0.05 * 0.95 / trials);
    CHECK(static_cast<double>(ok) / trials >= 1.0 - 0.05 - 3.0 * sigma);
}

TEST_CASE("r_sq rejects out-of-range statistics") {
    RngStream internal = SharedRandomness(15).child("sq").stream();
    auto q = []() { return 1.5; };
    CHECK_THROWS(r_sq(q, 0.1, 0.2, 0.05, internal, 1e-4));
}

TEST_CASE("parameter validation") {
    HHParams bad;
    bad.v = 0.5;
    bad.eps = 0.6;  // eps >= v
    CHECK_THROWS(bad.validate());
    RoundingParams badr{0.1, 0.2, 0.15};  // delta >= rho/2
    CHECK_THROWS(badr.validate());
    RngStream internal = SharedRandomness(16).child("x").stream();
    auto draw = []() -> std::size_t { return 0; };
    CHECK_THROWS(r_mass_estimate(draw, 0, 0.1, 0.2, 0.05, internal));
}
