#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "replikit/rng.hpp"

namespace replikit {

struct HHParams {
    double v = 0.5;       // target mass
    double eps = 0.1;     // error, in (0, v)
    double rho = 0.2;     // replicability
    double delta = 0.05;  // confidence, in (0, rho/3)
    std::optional<std::size_t> domain_bound;
    double budget_scale = 1.0;

    void validate() const {
        if (!(eps > 0.0 && eps < v && v <= 1.0)) throw std::invalid_argument("HHParams: need 0 < eps < v <= 1");
        if (!(delta > 0.0 && delta < rho / 3.0 && rho < 1.0))
            throw std::invalid_argument("HHParams: need 0 < delta < rho/3 < 1/3");
        if (budget_scale <= 0.0) throw std::invalid_argument("HHParams: budget_scale must be positive");
    }

    std::size_t candidate_samples() const {
        double m = (v - eps);
        return static_cast<std::size_t>(std::ceil(std::log(2.0 / (delta * m)) / m));
    }

    std::size_t estimate_samples(std::size_t candidate_count) const {
        double n = (648.0 * std::log(2.0 / delta) +
                    648.0 * static_cast<double>(candidate_count + 1) * std::log(2.0)) /
                   (rho * rho * eps * eps);
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(budget_scale * n)));
    }
};

// Replicable heavy hitters over a countable label space. `draw` yields one
// i.i.d. label per call; `rng` is the shared internal stream. If `domain`
// is given and smaller than the candidate budget, it replaces the sampling
// candidate phase. Output is the sorted list of labels whose empirical mass
// clears the random threshold v' in [v - 2eps/3, v - eps/3].
template <class Label, class Sampler>
std::vector<Label> r_heavy_hitters(Sampler&& draw, const HHParams& params, RngStream& rng,
                                   const std::vector<Label>* domain = nullptr) {
    params.validate();

    std::size_t cand_budget = params.candidate_samples();
    std::vector<Label> candidates;
    if (domain != nullptr && domain->size() < cand_budget) {
        candidates = *domain;
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    } else {
        std::map<Label, bool> seen;
        for (std::size_t i = 0; i < cand_budget; ++i) seen.emplace(draw(), true);
        for (auto& [label, _] : seen) candidates.push_back(label);
    }

    std::size_t n = params.estimate_samples(candidates.size());
    std::map<Label, std::size_t> counts;
    for (const auto& c : candidates) counts.emplace(c, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = counts.find(draw());
        // labels outside the candidate set act as the dummy overflow element
        if (it != counts.end()) ++it->second;
    }

    double v_prime = rng.next_uniform(params.v - 2.0 * params.eps / 3.0, params.v - params.eps / 3.0);

    std::vector<Label> out;
    for (const auto& [label, count] : counts)
        if (static_cast<double>(count) / static_cast<double>(n) >= v_prime) out.push_back(label);
    return out;  // map iteration: already sorted
}

struct RoundingParams {
    double eps = 0.1;
    double rho = 0.2;
    double delta = 0.05;

    void validate() const {
        if (!(delta > 0.0 && delta < rho / 2.0 && rho < 1.0))
            throw std::invalid_argument("RoundingParams: need 0 < delta < rho/2 < 1/2");
        if (eps <= 0.0) throw std::invalid_argument("RoundingParams: eps must be positive");
    }

    double alpha() const { return 2.0 * eps / (rho + 1.0 - 2.0 * delta); }
    double eps_prime() const { return eps * (rho - 2.0 * delta) / (rho + 1.0 - 2.0 * delta); }
};

// Replicable rounding: snaps each value to the midpoint of a randomly
// offset interval grid of width alpha. Offsets are drawn per coordinate in
// index order so paired executions stay aligned.
inline std::vector<double> r_round(const std::vector<double>& values, const RoundingParams& params,
                                   RngStream& rng) {
    params.validate();
    const double alpha = params.alpha();
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        double offset = rng.next_uniform(0.0, alpha);
        double z = std::floor((values[j] - offset) / alpha);
        out[j] = offset + (z + 0.5) * alpha;
    }
    return out;
}

// Replicable multinomial mass estimation over N fixed, ordered labels.
// `draw` yields one label index in [0, N) per call. Output is a probability
// vector: nonnegative, sums to 1 exactly, each coordinate within eps of the
// truth with probability >= 1-delta.
template <class Sampler>
std::vector<double> r_mass_estimate(Sampler&& draw, std::size_t N, double eps, double rho,
                                    double delta, RngStream& rng, double budget_scale = 1.0) {
    if (N == 0) throw std::invalid_argument("r_mass_estimate: N must be positive");
    if (!(delta > 0.0 && delta < rho / 3.0)) throw std::invalid_argument("r_mass_estimate: need delta < rho/3");

    const double eps_half = eps / 2.0;
    double n_theory = 8.0 * (std::log(1.0 / delta) + static_cast<double>(N) * std::log(2.0)) /
                      (eps_half * eps_half * (rho - 2.0 * delta) * (rho - 2.0 * delta));
    std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(budget_scale * n_theory)));

    std::vector<double> freq(N, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t label = draw();
        if (label >= N) throw std::out_of_range("r_mass_estimate: label out of range");
        freq[label] += 1.0;
    }
    for (double& f : freq) f /= static_cast<double>(n);

    RoundingParams rp{eps_half, rho, delta};
    std::vector<double> p = r_round(freq, rp, rng);

    // clamp negatives, then redistribute the surplus over positive entries;
    // the final exact fix-up lands on the largest coordinate
    for (int pass = 0; pass < 64; ++pass) {
        for (double& x : p) x = std::max(x, 0.0);
        double s = 0.0;
        for (double x : p) s += x;
        double excess = s - 1.0;
        if (std::abs(excess) < 1e-15) break;
        std::size_t positive = 0;
        for (double x : p)
            if (x > 0.0 || excess < 0.0) ++positive;
        if (positive == 0) positive = N;
        double adj = excess / static_cast<double>(positive);
        for (double& x : p)
            if (x > 0.0 || excess < 0.0) x -= adj;
    }
    for (double& x : p) x = std::max(x, 0.0);
    double s = 0.0;
    for (double x : p) s += x;
    auto largest = std::max_element(p.begin(), p.end());
    *largest += 1.0 - s;
    return p;
}

// Replicable SQ oracle: sample mean of a bounded statistic plus one-coordinate
// rounding. `draw_value` yields one i.i.d. evaluation in [0, 1] per call.
template <class Sampler>
double r_sq(Sampler&& draw_value, double eps, double rho, double delta, RngStream& rng,
            double budget_scale = 1.0) {
    if (!(delta > 0.0 && delta < rho / 3.0)) throw std::invalid_argument("r_sq: need delta < rho/3");
    RoundingParams rp{eps, rho, delta};
    double ep = rp.eps_prime();
    double n_theory = std::log(2.0 / delta) / (2.0 * ep * ep);
    std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(budget_scale * n_theory)));

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = draw_value();
        if (x < 0.0 || x > 1.0) throw std::out_of_range("r_sq: query value outside [0, 1]");
        sum += x;
    }
    std::vector<double> g{sum / static_cast<double>(n)};
    return r_round(g, rp, rng)[0];
}

}  // namespace replikit
