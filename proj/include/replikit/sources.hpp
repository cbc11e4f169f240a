#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "replikit/norms.hpp"
#include "replikit/points.hpp"
#include "replikit/rng.hpp"

namespace replikit {

// Affine record mapping raw input coordinates into the unit-diameter ball:
// normalized = (raw - translate) * scale.
struct Normalization {
    Point translate;
    double scale = 1.0;
};

class DistributionSource;

namespace detail {

struct TwoMoonsSpec {
    double sigma = 0.06;  // noise after normalization
};

struct TruncGaussSpec {
    std::vector<Point> means;
    std::vector<double> sigmas;
    std::vector<double> mix;  // sums to 1
};

struct FiniteSpec {
    std::vector<Point> points;
    std::vector<double> cumulative;  // prefix sums of the weights
};

struct MappedSpec {
    std::shared_ptr<const DistributionSource> base;
    std::function<Point(const Point&)> fn;
};

}  // namespace detail

// Sampleable distribution over the kappa-ball of diameter 1. Sampling is a
// pure function of (source, stream): same stream => identical sequence.
class DistributionSource {
public:
    static DistributionSource two_moons(double sigma = 0.06) {
        DistributionSource s;
        s.dim_ = 2;
        s.spec_ = detail::TwoMoonsSpec{sigma};
        return s;
    }

    // Isotropic Gaussian mixture truncated to the ball by rejection.
    static DistributionSource trunc_gauss_mixture(std::vector<Point> means,
                                                  std::vector<double> sigmas,
                                                  std::vector<double> mix,
                                                  NormFamily family = NormFamily::L2) {
        if (means.empty() || means.size() != sigmas.size() || means.size() != mix.size())
            throw std::invalid_argument("trunc_gauss_mixture: component size mismatch");
        DistributionSource s;
        s.dim_ = static_cast<int>(means[0].size());
        s.family_ = family;
        s.spec_ = detail::TruncGaussSpec{std::move(means), std::move(sigmas), std::move(mix)};
        return s;
    }

    static DistributionSource finite(std::vector<Point> points, std::vector<double> weights,
                                     NormFamily family = NormFamily::L2) {
        if (points.empty()) throw std::invalid_argument("finite: empty support");
        if (weights.empty()) weights.assign(points.size(), 1.0 / static_cast<double>(points.size()));
        if (weights.size() != points.size())
            throw std::invalid_argument("finite: weight count mismatch");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("finite: negative weight");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("finite: weights do not sum to 1");
        detail::FiniteSpec spec;
        spec.points = std::move(points);
        spec.cumulative.resize(weights.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            spec.cumulative[i] = acc;
        }
        spec.cumulative.back() = 1.0;
        DistributionSource s;
        s.dim_ = static_cast<int>(spec.points[0].size());
        s.family_ = family;
        NormSpec ns{family, 1, s.dim_};
        for (const auto& x : spec.points)
            if (norm_length(x, ns) > 0.5 + 1e-12)
                throw std::invalid_argument("finite: point outside the unit-diameter ball");
        s.spec_ = std::move(spec);
        return s;
    }

    // Parses the CSV file (header x0,...,x{d-1}[,w]), translates to the
    // bounding-box center and scales by the box's kappa-diameter so all
    // points fit in the unit-diameter ball. Defined in sources.cpp.
    static DistributionSource from_csv(const std::string& path, NormFamily family = NormFamily::L2);

    // Pushforward of `base` under `fn`; `out_dim` is fn's output dimension.
    static DistributionSource mapped(DistributionSource base, int out_dim,
                                     std::function<Point(const Point&)> fn) {
        DistributionSource s;
        s.dim_ = out_dim;
        s.family_ = base.family_;
        s.spec_ = detail::MappedSpec{std::make_shared<DistributionSource>(std::move(base)),
                                     std::move(fn)};
        return s;
    }

    int dim() const { return dim_; }
    NormFamily family() const { return family_; }
    const std::optional<Normalization>& normalization() const { return normalization_; }

    Point draw(RngStream& rng) const {
        if (const auto* tm = std::get_if<detail::TwoMoonsSpec>(&spec_)) return draw_two_moons(*tm, rng);
        if (const auto* tg = std::get_if<detail::TruncGaussSpec>(&spec_)) return draw_trunc_gauss(*tg, rng);
        if (const auto* mp = std::get_if<detail::MappedSpec>(&spec_)) return mp->fn(mp->base->draw(rng));
        const auto& f = std::get<detail::FiniteSpec>(spec_);
        double u = rng.next_double();
        std::size_t lo = 0, hi = f.cumulative.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (f.cumulative[mid] > u) hi = mid;
            else lo = mid + 1;
        }
        return f.points[lo];
    }

    PointSet sample(std::size_t n, RngStream& rng) const {
        if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
        PointSet out;
        out.points.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.points.push_back(draw(rng));
        return out;
    }

private:
    DistributionSource() = default;

    Point draw_two_moons(const detail::TwoMoonsSpec& tm, RngStream& rng) const {
        // interleaving half circles, rescaled into the ball, Gaussian noise,
        // rejection against the L2 ball
        const NormSpec l2{NormFamily::L2, 2, 2};
        for (;;) {
            double t = rng.next_uniform(0.0, 3.141592653589793238462643383280);
            bool second = rng.next_double() < 0.5;
            double rx, ry;
            if (!second) {
                rx = std::cos(t);
                ry = std::sin(t);
            } else {
                rx = 1.0 - std::cos(t);
                ry = 0.5 - std::sin(t);
            }
            // raw bounding box is [-1,2] x [-0.5,1]; center and shrink
            double x = (rx - 0.5) * 0.25 + tm.sigma * rng.next_gaussian();
            double y = (ry - 0.25) * 0.25 + tm.sigma * rng.next_gaussian();
            Point p{x, y};
            if (norm_length(p, l2) <= 0.5) return p;
        }
    }

    Point draw_trunc_gauss(const detail::TruncGaussSpec& tg, RngStream& rng) const {
        const NormSpec ns{family_, 2, dim_};
        for (;;) {
            double u = rng.next_double();
            std::size_t c = 0;
            double acc = 0.0;
            for (; c + 1 < tg.mix.size(); ++c) {
                acc += tg.mix[c];
                if (u < acc) break;
            }
            Point p(dim_);
            for (int j = 0; j < dim_; ++j)
                p[j] = tg.means[c][static_cast<std::size_t>(j)] + tg.sigmas[c] * rng.next_gaussian();
            if (norm_length(p, ns) <= 0.5) return p;
        }
    }

    int dim_ = 0;
    NormFamily family_ = NormFamily::L2;
    std::optional<Normalization> normalization_;
    std::variant<detail::TwoMoonsSpec, detail::TruncGaussSpec, detail::FiniteSpec,
                 detail::MappedSpec> spec_;

    friend DistributionSource csv_source_impl(const std::string&, NormFamily);
};

}  // namespace replikit
