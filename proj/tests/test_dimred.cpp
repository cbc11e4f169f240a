#include <doctest.h>

#include <cmath>

#include "replikit/dimred.hpp"
#include "replikit/sources.hpp"

using namespace replikit;

namespace {

Point random_unit_vector(int d, RngStream& rng) {
    Point x(d);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (int j = 0; j < d; ++j) {
            x[j] = rng.next_gaussian();
            norm += x[j] * x[j];
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& v : x) v /= norm;
    return x;
}

}  // namespace

TEST_CASE("target_dim formula") {
    CHECK(target_dim(1, 0.5, 3, 0.1) == 17);  // ceil(4 ln 60)
    // monotone as eps decreases
    CHECK(target_dim(1, 0.25, 3, 0.1) >= target_dim(1, 0.5, 3, 0.1));
    // p^4 factor: 16x before the ceiling
    double base = 1.0 / 0.25 * std::log(3.0 / (0.5 * 0.1));
    CHECK(target_dim(2, 0.5, 3, 0.1) == static_cast<int>(std::ceil(16.0 * base)));
}

TEST_CASE("square JL map preserves norms") {
    RngStream rng = SharedRandomness(50).child("jl").stream();
    JLMap jl = make_jl(8, 8, rng);
    RngStream probe = SharedRandomness(51).child("probe").stream();
    for (int t = 0; t < 100; ++t) {
        Point x = random_unit_vector(8, probe);
        Point y = jl.project(x);
        double n = 0.0;
        for (double v : y) n += v * v;
        CHECK(std::abs(std::sqrt(n) - 1.0) <= 1e-9);
    }
}

TEST_CASE("JL rows are orthonormal before scaling") {
    RngStream rng = SharedRandomness(52).child("jl").stream();
    JLMap jl = make_jl(64, 16, rng);
    const double scale2 = 64.0 / 16.0;  // rows carry sqrt(d/m)
    for (int i = 0; i < jl.m; ++i)
        for (int j = i; j < jl.m; ++j) {
            double dot = 0.0;
            for (int c = 0; c < jl.d; ++c) dot += jl.matrix[i][c] * jl.matrix[j][c];
            CHECK(std::abs(dot / scale2 - (i == j ? 1.0 : 0.0)) <= 1e-9);
        }
}

TEST_CASE("JL norm preservation statistics at eps = 0.5") {
    RngStream rng = SharedRandomness(53).child("jl").stream();
    const int d = 64;
    const int m = 16;
    JLMap jl = make_jl(d, m, rng);
    RngStream probe = SharedRandomness(54).child("probe").stream();
    int ok = 0;
    const int trials = 1000;
    const double eps = 0.5;
    for (int t = 0; t < trials; ++t) {
        Point x = random_unit_vector(d, probe);
        Point y = jl.project(x);
        double n = 0.0;
        for (double v : y) n += v * v;
        n = std::sqrt(n);
        if (n >= 1.0 / (1.0 + eps) && n <= 1.0 + eps) ++ok;
    }
    CHECK(ok >= 950);
}

TEST_CASE("identity fallback when m >= d") {
    RngStream rng = SharedRandomness(55).child("jl").stream();
    JLMap jl = make_jl(2, 17, rng);
    CHECK(jl.identity);
    CHECK(jl.m == 2);
    CHECK(jl.project({0.1, -0.3}) == Point{0.1, -0.3});
}

TEST_CASE("JL construction is deterministic in the stream") {
    RngStream r1 = SharedRandomness(56).child("jl").stream();
    RngStream r2 = SharedRandomness(56).child("jl").stream();
    CHECK(make_jl(16, 4, r1).matrix == make_jl(16, 4, r2).matrix);
}

TEST_CASE("classify snaps before projecting") {
    ClusteringFunction f;
    f.scale = 1.0;
    f.grid_side = 0.25;
    f.jl.d = 1;
    f.jl.m = 1;
    f.jl.identity = true;
    f.centers = {{-0.375}, {0.375}};
    f.p = 2;
    // constant within one fine-grid cell
    CHECK(f.classify({0.30}) == f.classify({0.49}));
    CHECK(f.classify({0.30}) == 1);
    CHECK(f.classify({-0.30}) == 0);
    // a point at a center's cell maps to that center
    CHECK(f.classify({-0.375}) == 0);
}

TEST_CASE("serialization is canonical") {
    ClusteringFunction f;
    f.scale = 0.5;
    f.grid_side = 0.125;
    f.jl.d = 2;
    f.jl.m = 2;
    f.jl.identity = true;
    f.centers = {{0.1, 0.2}};
    f.p = 2;
    CHECK(f.serialize() == f.serialize());
    ClusteringFunction g = f;
    g.centers[0][0] = 0.10000000001;
    CHECK(f.serialize() != g.serialize());
}

TEST_CASE("euclidean pipeline runs end to end in 2D and is replicable") {
    DistributionSource src = DistributionSource::trunc_gauss_mixture(
        {{-0.3, -0.2}, {0.0, 0.3}, {0.3, -0.2}}, {0.05, 0.05, 0.05}, {0.34, 0.33, 0.33});
    RngStream data = SharedRandomness(57).child("data").stream();
    int match = 0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
        SharedRandomness internal(7000 + t);
        ClusteringFunction a = euclidean_pipeline(src, 3, 2, 0.5, 0.2, 0.05, data, internal);
        ClusteringFunction b = euclidean_pipeline(src, 3, 2, 0.5, 0.2, 0.05, data, internal);
        REQUIRE(a.centers.size() == 3);
        CHECK(a.jl.identity);  // m = target_dim >> 2 in the plane
        if (a.serialize() == b.serialize()) ++match;
    }
    CHECK(match >= 7);
}
