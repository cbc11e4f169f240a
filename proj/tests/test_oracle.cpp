#include <doctest.h>

#include <cmath>

#include "replikit/oracle.hpp"
#include "replikit/rng.hpp"
#include "replikit/sources.hpp"

using namespace replikit;

TEST_CASE("clustering_cost basic cases") {
    NormSpec l2p2{NormFamily::L2, 2, 1};
    PointSet single;
    single.points = {{0.0}};
    CHECK(clustering_cost(single, {{0.0}}, l2p2) == 0.0);

    PointSet two;
    two.points = {{0.0}, {0.4}};
    CHECK(clustering_cost(two, {{0.0}}, l2p2) == doctest::Approx(0.08).epsilon(1e-12));

    NormSpec kc{NormFamily::L2, 0, 1};  // k-centers mode
    CHECK(clustering_cost(two, {{0.0}}, kc) == doctest::Approx(0.4).epsilon(1e-12));

    CHECK_THROWS(clustering_cost(two, {}, l2p2));
}

TEST_CASE("parallel and serial cost kernels are bit-identical") {
    DistributionSource src = DistributionSource::two_moons();
    RngStream rng = SharedRandomness(19).child("data").stream();
    PointSet pts = src.sample(5000, rng);
    std::vector<Point> centers = src.sample(7, rng).points;
    for (int p : {1, 2}) {
        NormSpec spec{NormFamily::L2, p, 2};
        CHECK(clustering_cost(pts, centers, spec) == clustering_cost_serial(pts, centers, spec));
    }
    NormSpec kc{NormFamily::L2, 0, 2};
    CHECK(clustering_cost(pts, centers, kc) == clustering_cost_serial(pts, centers, kc));
}

TEST_CASE("weighted k-means centroid, k=1") {
    PointSet pts;
    pts.points = {{0.0}, {0.5}};
    NormSpec spec{NormFamily::L2, 2, 1};
    RngStream rng = SharedRandomness(20).child("oracle").stream();
    LloydResult res = weighted_kpp_lloyd(pts, 1, spec, rng);
    REQUIRE(res.centers.size() == 1);
    CHECK(res.centers[0][0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("k equal to the number of distinct points gives zero cost") {
    PointSet pts;
    pts.points = {{-0.3, 0.1}, {0.2, 0.2}, {0.0, -0.4}};
    NormSpec spec{NormFamily::L2, 2, 2};
    RngStream rng = SharedRandomness(21).child("oracle").stream();
    LloydResult res = weighted_kpp_lloyd(pts, 3, spec, rng);
    CHECK(res.cost == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(res.duplicate_centers);
}

TEST_CASE("weighted k-medians median, k=1") {
    PointSet pts;
    pts.points = {{0.0}, {0.1}, {0.5}};
    NormSpec spec{NormFamily::L2, 1, 1};
    RngStream rng = SharedRandomness(22).child("oracle").stream();
    LloydResult res = weighted_kpp_lloyd(pts, 1, spec, rng);
    REQUIRE(res.centers.size() == 1);
    CHECK(res.centers[0][0] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("oracle is deterministic given the stream") {
    DistributionSource src = DistributionSource::two_moons();
    RngStream data = SharedRandomness(23).child("data").stream();
    PointSet pts = src.sample(500, data);
    NormSpec spec{NormFamily::L2, 2, 2};
    RngStream r1 = SharedRandomness(4).child("oracle").stream();
    RngStream r2 = SharedRandomness(4).child("oracle").stream();
    LloydResult a = weighted_kpp_lloyd(pts, 3, spec, r1);
    LloydResult b = weighted_kpp_lloyd(pts, 3, spec, r2);
    CHECK(a.centers == b.centers);
    CHECK(a.cost == b.cost);
}

TEST_CASE("duplicate centers are flagged when k exceeds distinct points") {
    PointSet pts;
    pts.points = {{0.1}, {0.1}};
    NormSpec spec{NormFamily::L2, 2, 1};
    RngStream rng = SharedRandomness(24).child("oracle").stream();
    LloydResult res = weighted_kpp_lloyd(pts, 2, spec, rng);
    CHECK(res.duplicate_centers);
}

TEST_CASE("greedy k-centers hand trace") {
    // raw points {0, 0.3, 1} scaled into the ball
    PointSet pts;
    pts.points = {{-0.5}, {-0.2}, {0.5}};
    NormSpec spec{NormFamily::L2, 0, 1};
    auto centers = greedy_kcenters(pts, 2, spec);
    REQUIRE(centers.size() == 2);
    CHECK(centers[0] == Point{-0.5});
    CHECK(centers[1] == Point{0.5});
    CHECK(clustering_cost(pts, centers, spec) == doctest::Approx(0.3).epsilon(1e-12));

    // k = n: zero cost
    auto all = greedy_kcenters(pts, 3, spec);
    CHECK(clustering_cost(pts, all, spec) == 0.0);
}

TEST_CASE("greedy k-centers is a 2-approximation against brute force") {
    NormSpec spec{NormFamily::L2, 0, 1};
    RngStream rng = SharedRandomness(25).child("inst").stream();
    for (int trial = 0; trial < 200; ++trial) {
        PointSet pts;
        for (int i = 0; i < 8; ++i) pts.points.push_back({rng.next_uniform(-0.5, 0.5)});
        auto greedy = greedy_kcenters(pts, 2, spec);
        auto best = brute_force_opt(pts, 2, spec, pts.points);
        CHECK(clustering_cost(pts, greedy, spec) <= 2.0 * best.cost + 1e-12);
    }
}

TEST_CASE("brute force basics") {
    PointSet pts;
    pts.points = {{-0.4}, {-0.35}, {0.0}, {0.3}, {0.45}};
    NormSpec spec{NormFamily::L2, 1, 1};

    // k = |candidates|: everything is a center
    auto all = brute_force_opt(pts, 5, spec, pts.points);
    CHECK(all.cost == 0.0);

    // exhaustive hand enumeration: best 2-subset is {-0.35 (or -0.4), 0.3-ish}
    auto best = brute_force_opt(pts, 2, spec, pts.points);
    double expected = 1e18;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) {
            double c = clustering_cost(pts, {pts.points[i], pts.points[j]}, spec);
            expected = std::min(expected, c);
        }
    CHECK(best.cost == doctest::Approx(expected).epsilon(1e-12));

    // the minimum dominates the heuristic oracle
    RngStream rng = SharedRandomness(26).child("oracle").stream();
    LloydResult lloyd = weighted_kpp_lloyd(pts, 2, spec, rng);
    CHECK(best.cost <= lloyd.cost + 1e-12);

    CHECK_THROWS(brute_force_opt(pts, 2, spec, pts.points, 5));  // budget exceeded
}
