// Compares the OpenMP clustering-cost kernel against the serial reference:
// verifies bit-identical results, then reports wall-clock for both over a
// sweep of point counts.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "replikit/oracle.hpp"
#include "replikit/rng.hpp"
#include "replikit/sources.hpp"

using namespace replikit;

int main(int argc, char** argv) {
    const int d = argc > 1 ? std::atoi(argv[1]) : 8;
    const int k = argc > 2 ? std::atoi(argv[2]) : 16;
    NormSpec spec{NormFamily::L2, 2, d};

    std::vector<Point> means(3, Point(d, 0.0));
    means[1][0] = 0.3;
    means[2][0] = -0.3;
    DistributionSource source = DistributionSource::trunc_gauss_mixture(
        means, {0.05, 0.05, 0.05}, {0.4, 0.3, 0.3});
    RngStream rng = SharedRandomness(7).child("bench").stream();

    std::printf("n,parallel_s,serial_s,identical\n");
    for (std::size_t n : {1000u, 10000u, 100000u, 400000u}) {
        PointSet pts = source.sample(n, rng);
        std::vector<Point> centers = source.sample(static_cast<std::size_t>(k), rng).points;

        // warm-up
        clustering_cost(pts, centers, spec);

        auto t0 = std::chrono::steady_clock::now();
        double par = 0.0;
        for (int r = 0; r < 5; ++r) par = clustering_cost(pts, centers, spec);
        auto t1 = std::chrono::steady_clock::now();
        double ser = 0.0;
        for (int r = 0; r < 5; ++r) ser = clustering_cost_serial(pts, centers, spec);
        auto t2 = std::chrono::steady_clock::now();

        double ps = std::chrono::duration<double>(t1 - t0).count() / 5.0;
        double ss = std::chrono::duration<double>(t2 - t1).count() / 5.0;
        std::printf("%zu,%.6f,%.6f,%d\n", n, ps, ss, par == ser ? 1 : 0);
        if (par != ser) {
            std::fprintf(stderr, "parallel and serial kernels disagree\n");
            return 1;
        }
    }
    return 0;
}
