#include "replikit/sources.hpp"

#include <fstream>
#include <sstream>

namespace replikit {

DistributionSource csv_source_impl(const std::string& path, NormFamily family) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV file: " + path);

    // header: x0,...,x{d-1}[,w]
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) header.push_back(tok);
    }
    bool has_weight = !header.empty() && header.back() == "w";
    int d = static_cast<int>(header.size()) - (has_weight ? 1 : 0);
    if (d < 1) throw std::runtime_error("CSV header has no coordinate columns: " + path);

    std::vector<Point> raw;
    std::vector<double> weights;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) {
            try {
                row.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw std::runtime_error("malformed CSV row " + std::to_string(lineno) + " in " + path);
            }
        }
        if (static_cast<int>(row.size()) != d + (has_weight ? 1 : 0))
            throw std::runtime_error("wrong column count at CSV row " + std::to_string(lineno) + " in " + path);
        if (has_weight) {
            weights.push_back(row.back());
            row.pop_back();
        }
        raw.push_back(std::move(row));
    }
    if (raw.empty()) throw std::runtime_error("CSV file has no data rows: " + path);

    if (has_weight) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::runtime_error("negative weight in " + path);
            total += w;
        }
        if (total <= 0.0) throw std::runtime_error("weights sum to zero in " + path);
        for (double& w : weights) w /= total;
    }

    // normalize: translate to the bounding-box center, scale by the box's
    // kappa-diameter
    Point lo = raw[0], hi = raw[0];
    for (const auto& x : raw)
        for (int j = 0; j < d; ++j) {
            lo[static_cast<std::size_t>(j)] = std::min(lo[static_cast<std::size_t>(j)], x[static_cast<std::size_t>(j)]);
            hi[static_cast<std::size_t>(j)] = std::max(hi[static_cast<std::size_t>(j)], x[static_cast<std::size_t>(j)]);
        }
    Point center(static_cast<std::size_t>(d));
    Point span(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        center[static_cast<std::size_t>(j)] =
            0.5 * (lo[static_cast<std::size_t>(j)] + hi[static_cast<std::size_t>(j)]);
        span[static_cast<std::size_t>(j)] = hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)];
    }
    NormSpec ns{family, 1, d};
    double diameter = norm_length(span, ns);
    double scale = diameter > 0.0 ? 1.0 / diameter : 1.0;

    for (auto& x : raw)
        for (int j = 0; j < d; ++j)
            x[static_cast<std::size_t>(j)] =
                (x[static_cast<std::size_t>(j)] - center[static_cast<std::size_t>(j)]) * scale;

    DistributionSource s = DistributionSource::finite(std::move(raw), std::move(weights), family);
    s.normalization_ = Normalization{std::move(center), scale};
    return s;
}

DistributionSource DistributionSource::from_csv(const std::string& path, NormFamily family) {
    return csv_source_impl(path, family);
}

}  // namespace replikit
