#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "replikit/norms.hpp"
#include "replikit/sources.hpp"

using namespace replikit;

TEST_CASE("norm_distance basic cases") {
    NormSpec l2{NormFamily::L2, 2, 2};
    NormSpec l1{NormFamily::L1, 1, 2};
    CHECK(norm_distance({0, 0}, {0, 0}, l2) == 0.0);
    CHECK(norm_distance({0.3, 0}, {0, 0.4}, l1) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(norm_distance({0.3, 0}, {0, 0.4}, l2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS(norm_distance({0.1}, {0.1, 0.2}, l2));
}

TEST_CASE("norm_distance is symmetric and sign-invariant on basis vectors") {
    NormSpec linf{NormFamily::Linf, 1, 3};
    CHECK(norm_distance({0.2, 0, 0.1}, {0, 0.3, 0}, linf) ==
          norm_distance({0, 0.3, 0}, {0.2, 0, 0.1}, linf));
    for (NormFamily f : {NormFamily::L1, NormFamily::L2, NormFamily::Linf}) {
        NormSpec s{f, 1, 3};
        CHECK(norm_length({1.0, 0.0, 0.0}, s) == 1.0);
        CHECK(norm_length({-1.0, 0.0, 0.0}, s) == 1.0);
    }
}

TEST_CASE("delta per family") {
    CHECK(NormSpec{NormFamily::L2, 2, 4}.delta() == 2.0);
    CHECK(NormSpec{NormFamily::Linf, 1, 7}.delta() == 1.0);
    CHECK(NormSpec{NormFamily::L1, 1, 3}.delta() == 3.0);
    for (int d = 1; d <= 8; ++d) {
        CHECK(NormSpec{NormFamily::Linf, 1, d}.delta() <= NormSpec{NormFamily::L2, 1, d}.delta());
        CHECK(NormSpec{NormFamily::L2, 1, d}.delta() <= NormSpec{NormFamily::L1, 1, d}.delta());
        CHECK(NormSpec{NormFamily::Linf, 1, d}.delta() >= 1.0);
        CHECK(NormSpec{NormFamily::L1, 1, d}.delta() <= static_cast<double>(d));
    }
}

TEST_CASE("point mass sampling") {
    DistributionSource s = DistributionSource::finite({{0.1, -0.2}}, {1.0});
    RngStream rng = SharedRandomness(1).child("data").stream();
    PointSet out = s.sample(5, rng);
    REQUIRE(out.points.size() == 5);
    for (const Point& x : out.points) CHECK(x == Point{0.1, -0.2});
}

TEST_CASE("two moons sampling is deterministic in the stream") {
    DistributionSource s = DistributionSource::two_moons();
    RngStream r1 = SharedRandomness(9).child("data").stream();
    RngStream r2 = SharedRandomness(9).child("data").stream();
    PointSet a = s.sample(1000, r1);
    PointSet b = s.sample(1000, r2);
    CHECK(a.points == b.points);
}

TEST_CASE("finite 50/50 source concentrates empirically") {
    DistributionSource s = DistributionSource::finite({{-0.25}, {0.25}}, {0.5, 0.5});
    RngStream rng = SharedRandomness(17).child("data").stream();
    int ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        PointSet out = s.sample(10000, rng);
        int first = 0;
        for (const Point& x : out.points) first += (x[0] < 0.0);
        if (std::abs(first / 10000.0 - 0.5) <= 0.02) ++ok;
    }
    CHECK(ok >= 95);
}

TEST_CASE("every sample lies in the unit-diameter ball") {
    NormSpec l2{NormFamily::L2, 2, 2};
    RngStream rng = SharedRandomness(23).child("data").stream();
    for (DistributionSource s :
         {DistributionSource::two_moons(),
          DistributionSource::trunc_gauss_mixture({{-0.3, 0.0}, {0.3, 0.0}}, {0.1, 0.1},
                                                  {0.5, 0.5})}) {
        for (int i = 0; i < 1000000; ++i)
            REQUIRE(norm_length(s.draw(rng), l2) <= 0.5 + 1e-12);
    }
}

TEST_CASE("csv ingestion normalizes into the ball") {
    const char* path = "test_sources_tmp.csv";
    {
        std::ofstream f(path);
        f << "x0,x1\n10,0\n20,0\n10,4\n";
    }
    DistributionSource s = DistributionSource::from_csv(path);
    RngStream rng = SharedRandomness(5).child("data").stream();
    NormSpec l2{NormFamily::L2, 2, 2};
    for (int i = 0; i < 100; ++i) CHECK(norm_length(s.draw(rng), l2) <= 0.5 + 1e-12);
    std::remove(path);
}

TEST_CASE("csv ingestion rejects malformed rows") {
    const char* path = "test_sources_bad.csv";
    {
        std::ofstream f(path);
        f << "x0,x1\n1,2\n3,notanumber\n";
    }
    CHECK_THROWS(DistributionSource::from_csv(path));
    std::remove(path);
    CHECK_THROWS(DistributionSource::from_csv("does_not_exist.csv"));
}

TEST_CASE("finite source validation") {
    CHECK_THROWS(DistributionSource::finite({{0.1}}, {0.5}));          // weights sum != 1
    CHECK_THROWS(DistributionSource::finite({{0.9}}, {1.0}));          // outside ball
    CHECK_THROWS(DistributionSource::finite({{0.1}, {0.2}}, {1.0}));   // count mismatch
}

TEST_CASE("point set validation") {
    NormSpec l2{NormFamily::L2, 2, 1};
    PointSet ok;
    ok.points = {{0.5}, {-0.5}};
    ok.weights = {0.25, 0.75};
    CHECK_NOTHROW(ok.validate(l2));

    PointSet bad_weight = ok;
    bad_weight.weights = {0.5, 0.6};
    CHECK_THROWS(bad_weight.validate(l2));

    PointSet outside = ok;
    outside.points[0] = {0.51};
    CHECK_THROWS(outside.validate(l2));
}
