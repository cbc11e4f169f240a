// replikit CLI: run | paired | bench | gen
//
// Exit codes: 0 ok, 1 usage/config error, 2 algorithmic failure, 3 IO error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "replikit/dimred.hpp"
#include "replikit/kcenters.hpp"
#include "replikit/oracle.hpp"
#include "replikit/pipelines.hpp"
#include "replikit/rng.hpp"
#include "replikit/sources.hpp"

namespace {

using nlohmann::ordered_json;
using namespace replikit;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ordered_json raw;  // embedded verbatim into every output sidecar
    ordered_json source;
    std::string algorithm = "kmeans";  // kmeans | kmedians | euclidean | cover | kcenters | vanilla
    int k = 3;
    int p = 2;
    double eps = 0.5;
    double rho = 0.2;
    double delta = 0.05;
    double c = 0.0625;  // k-centers grid side
    std::uint64_t seed = 1;
    std::size_t trials = 50;
    double budget_scale = 1.0;
    std::size_t n_samples = 2048;  // vanilla / gen sample size
    std::string out_dir = "out";
    PipelineBudget budget;
};

RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed,
                      std::optional<std::string> out, std::optional<std::size_t> trials,
                      std::optional<double> budget_scale) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig cfg;
    cfg.source = j.value("source", ordered_json{{"type", "two_moons"}});
    if (j.contains("algorithm")) {
        const auto& a = j["algorithm"];
        cfg.algorithm = a.value("kind", cfg.algorithm);
        cfg.k = a.value("k", cfg.k);
        cfg.p = a.value("p", cfg.p);
        cfg.eps = a.value("eps", cfg.eps);
        cfg.rho = a.value("rho", cfg.rho);
        cfg.delta = a.value("delta", cfg.delta);
        cfg.c = a.value("c", cfg.c);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.budget_scale = j.value("budget_scale", cfg.budget_scale);
    cfg.n_samples = j.value("n_samples", cfg.n_samples);
    cfg.out_dir = j.value("out", cfg.out_dir);

    if (j.contains("budget")) {
        const auto& b = j["budget"];
        cfg.budget.opt.budget_scale = b.value("opt_budget_scale", cfg.budget.opt.budget_scale);
        cfg.budget.opt.trial_cap = b.value("opt_trial_cap", cfg.budget.opt.trial_cap);
        cfg.budget.opt.per_trial_sample_cap =
            b.value("opt_per_trial_sample_cap", cfg.budget.opt.per_trial_sample_cap);
        cfg.budget.coreset_budget_scale =
            b.value("coreset_budget_scale", cfg.budget.coreset_budget_scale);
        cfg.budget.coreset_sample_cap = b.value("coreset_sample_cap", cfg.budget.coreset_sample_cap);
        cfg.budget.mass_eps_floor = b.value("mass_eps_floor", cfg.budget.mass_eps_floor);
        cfg.budget.v_floor = b.value("v_floor", cfg.budget.v_floor);
        cfg.budget.lloyd_iters = b.value("lloyd_iters", cfg.budget.lloyd_iters);
        cfg.budget.eval_samples = b.value("eval_samples", cfg.budget.eval_samples);
    }

    if (seed) cfg.seed = *seed;
    if (out) cfg.out_dir = *out;
    if (trials) cfg.trials = *trials;
    if (budget_scale) cfg.budget_scale = *budget_scale;

    // budget_scale multiplies every stage budget
    cfg.budget.opt.budget_scale *= cfg.budget_scale;
    cfg.budget.coreset_budget_scale *= cfg.budget_scale;

    if (cfg.k < 1) throw UsageError("k must be >= 1");
    if (cfg.p != 1 && cfg.p != 2) throw UsageError("p must be 1 or 2");
    if (!(cfg.eps > 0 && cfg.rho > 0 && cfg.rho < 1 && cfg.delta > 0 && cfg.delta < cfg.rho / 3))
        throw UsageError("need eps > 0 and 0 < delta < rho/3 < 1/3");

    cfg.raw = j;
    cfg.raw["seed"] = cfg.seed;
    cfg.raw["trials"] = cfg.trials;
    cfg.raw["budget_scale"] = cfg.budget_scale;
    cfg.raw["out"] = cfg.out_dir;
    return cfg;
}

DistributionSource make_source(const ordered_json& s) {
    const std::string type = s.value("type", "two_moons");
    if (type == "two_moons") return DistributionSource::two_moons(s.value("sigma", 0.06));
    if (type == "trunc_gauss") {
        std::vector<Point> means = s.at("means").get<std::vector<Point>>();
        std::vector<double> sigmas = s.at("sigmas").get<std::vector<double>>();
        std::vector<double> mix = s.at("mix").get<std::vector<double>>();
        return DistributionSource::trunc_gauss_mixture(std::move(means), std::move(sigmas),
                                                       std::move(mix));
    }
    if (type == "finite") {
        std::vector<Point> points = s.at("points").get<std::vector<Point>>();
        std::vector<double> weights = s.value("weights", std::vector<double>{});
        return DistributionSource::finite(std::move(points), std::move(weights));
    }
    if (type == "csv") return DistributionSource::from_csv(s.at("path").get<std::string>());
    throw UsageError("unknown source type: " + type);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string centers_csv(const std::vector<Point>& centers) {
    std::ostringstream os;
    os.precision(17);
    if (!centers.empty()) {
        for (std::size_t j = 0; j < centers[0].size(); ++j) os << (j ? "," : "") << "x" << j;
        os << "\n";
    }
    for (const auto& c : centers) {
        for (std::size_t j = 0; j < c.size(); ++j) os << (j ? "," : "") << c[j];
        os << "\n";
    }
    return os.str();
}

// Static scatter plot: first two coordinates, samples colored by nearest
// center, centers drawn as crosses. Deterministic byte output.
std::string scatter_svg(const std::vector<Point>& samples, const std::vector<Point>& centers,
                        const NormSpec& spec) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    const int W = 480;
    auto px = [&](double v) { return (v + 0.6) / 1.2 * W; };
    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << W
       << "\" viewBox=\"0 0 " << W << " " << W << "\">\n"
       << "<rect width=\"" << W << "\" height=\"" << W << "\" fill=\"white\"/>\n";
    for (const auto& x : samples) {
        int best = 0;
        if (!centers.empty()) {
            double bd = norm_distance(x, centers[0], spec);
            for (std::size_t f = 1; f < centers.size(); ++f) {
                double d2 = norm_distance(x, centers[f], spec);
                if (d2 < bd) {
                    bd = d2;
                    best = static_cast<int>(f);
                }
            }
        }
        os << "<circle cx=\"" << px(x[0]) << "\" cy=\"" << px(-(x.size() > 1 ? x[1] : 0.0))
           << "\" r=\"2\" fill=\"" << palette[best % 8] << "\" fill-opacity=\"0.6\"/>\n";
    }
    for (std::size_t f = 0; f < centers.size(); ++f) {
        double cx = px(centers[f][0]);
        double cy = px(-(centers[f].size() > 1 ? centers[f][1] : 0.0));
        os << "<path d=\"M" << cx - 6 << " " << cy << " H" << cx + 6 << " M" << cx << " "
           << cy - 6 << " V" << cy + 6 << "\" stroke=\"black\" stroke-width=\"2.5\"/>\n"
           << "<path d=\"M" << cx - 6 << " " << cy << " H" << cx + 6 << " M" << cx << " "
           << cy - 6 << " V" << cy + 6 << "\" stroke=\"" << palette[f % 8]
           << "\" stroke-width=\"1.5\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// One pipeline execution. `trial` indexes the data stream; the internal
// stream depends only on the seed, so paired executions share it.
PipelineResult run_once(const RunConfig& cfg, const DistributionSource& source,
                        std::uint64_t trial) {
    SharedRandomness internal(cfg.seed);
    RngStream data_rng = SharedRandomness(mix64(cfg.seed) ^ 0x9e3779b97f4a7c15ull)
                             .child("data-" + std::to_string(trial))
                             .stream();
    if (cfg.algorithm == "kmeans")
        return r_kmeans(source, cfg.k, cfg.eps, cfg.rho, cfg.delta, data_rng, internal, cfg.budget);
    if (cfg.algorithm == "kmedians")
        return r_kmedians(source, cfg.k, cfg.eps, cfg.rho, cfg.delta, data_rng, internal,
                          cfg.budget);
    if (cfg.algorithm == "vanilla")
        return vanilla_clustering(source, cfg.k, cfg.p, data_rng, internal, cfg.n_samples,
                                  cfg.budget.lloyd_iters);
    if (cfg.algorithm == "cover") {
        PipelineResult res;
        res.centers = r_kmeans_cover(source, cfg.k, cfg.p, cfg.eps, cfg.rho, cfg.delta, data_rng,
                                     internal, cfg.budget_scale);
        res.k = cfg.k;
        res.p = cfg.p;
        res.eps = cfg.eps;
        res.rho = cfg.rho;
        res.delta = cfg.delta;
        res.master_seed = cfg.seed;
        NormSpec spec{NormFamily::L2, cfg.p, source.dim()};
        EvalResult ev = evaluate(res.centers, spec, source, cfg.budget.eval_samples, data_rng);
        res.eval_cost = ev.cost;
        res.eval_halfwidth = ev.halfwidth;
        return res;
    }
    if (cfg.algorithm == "euclidean") {
        ClusteringFunction f = euclidean_pipeline(source, cfg.k, cfg.p, cfg.eps, cfg.rho,
                                                  cfg.delta, data_rng, internal);
        PipelineResult res;
        res.centers = f.centers;
        res.k = cfg.k;
        res.p = cfg.p;
        res.eps = cfg.eps;
        res.rho = cfg.rho;
        res.delta = cfg.delta;
        res.master_seed = cfg.seed;
        return res;
    }
    if (cfg.algorithm == "kcenters") {
        KCentersParams kp;
        kp.c = cfg.c;
        kp.k = cfg.k;
        kp.rho = cfg.rho;
        kp.delta = cfg.delta;
        kp.budget_scale *= cfg.budget_scale;
        NormSpec spec{NormFamily::L2, 0, source.dim()};
        RngStream internal_rng = internal.child("kcenters").stream();
        PipelineResult res;
        res.centers = r_kcenters(source, kp, spec, data_rng, internal_rng);
        res.k = cfg.k;
        res.p = 0;
        res.rho = cfg.rho;
        res.delta = cfg.delta;
        res.master_seed = cfg.seed;
        NormSpec eval_spec{NormFamily::L2, 0, source.dim()};
        EvalResult ev = evaluate(res.centers, eval_spec, source, cfg.budget.eval_samples, data_rng);
        res.eval_cost = ev.cost;
        res.eval_halfwidth = ev.halfwidth;
        return res;
    }
    throw UsageError("unknown algorithm kind: " + cfg.algorithm);
}

ordered_json result_sidecar(const RunConfig& cfg, const PipelineResult& res) {
    ordered_json j;
    j["config"] = cfg.raw;
    j["result"] = ordered_json::parse(res.serialize());
    j["eval_cost"] = res.eval_cost;
    j["eval_halfwidth"] = res.eval_halfwidth;
    return j;
}

int cmd_run(const RunConfig& cfg) {
    DistributionSource source = make_source(cfg.source);
    std::filesystem::create_directories(cfg.out_dir);
    PipelineResult res = run_once(cfg, source, 0);

    std::filesystem::path out(cfg.out_dir);
    write_file(out / "result.json", result_sidecar(cfg, res).dump(2) + "\n");
    write_file(out / "centers.csv", centers_csv(res.centers));

    RngStream plot_rng = SharedRandomness(cfg.seed).child("plot").stream();
    std::vector<Point> samples = source.sample(1000, plot_rng).points;
    NormSpec spec{NormFamily::L2, cfg.p == 0 ? 1 : cfg.p, source.dim()};
    write_file(out / "scatter.svg", scatter_svg(samples, res.centers, spec));

    std::cout << "wrote " << (out / "result.json").string() << " (eval cost " << res.eval_cost
              << " +/- " << res.eval_halfwidth << ")\n";
    return 0;
}

// Which pipeline stage diverged first between two serialized results.
std::string first_divergence(const std::string& a, const std::string& b) {
    if (a == b) return "none";
    ordered_json ja = ordered_json::parse(a);
    ordered_json jb = ordered_json::parse(b);
    if (ja["Lambda"] != jb["Lambda"]) return "Lambda";
    if (ja["coreset"]["reps"] != jb["coreset"]["reps"]) return "tree";
    if (ja["coreset"]["weights"] != jb["coreset"]["weights"]) return "weights";
    if (ja["centers"] != jb["centers"]) return "oracle";
    return "other";
}

int cmd_paired(const RunConfig& cfg) {
    if (cfg.trials < 2) throw UsageError("paired: trials must be >= 2");
    DistributionSource source = make_source(cfg.source);
    std::filesystem::create_directories(cfg.out_dir);

    std::size_t matches = 0;
    std::map<std::string, std::size_t> divergence;
    std::ostringstream csv;
    csv << "trial,match,first_divergence,seconds\n";
    double total_s = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        PipelineResult a = run_once(cfg, source, 2 * t);
        PipelineResult b = run_once(cfg, source, 2 * t + 1);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        total_s += secs;
        std::string sa = a.serialize(), sb = b.serialize();
        std::string div = first_divergence(sa, sb);
        bool match = (div == "none");
        if (match) ++matches;
        else ++divergence[div];
        csv << t << "," << (match ? 1 : 0) << "," << div << "," << secs << "\n";
    }

    double n = static_cast<double>(cfg.trials);
    double rate = static_cast<double>(matches) / n;
    double hw = 1.96 * std::sqrt(std::max(rate * (1.0 - rate), 0.25 / n) / n);

    ordered_json report;
    report["config"] = cfg.raw;
    report["trials"] = cfg.trials;
    report["matches"] = matches;
    report["match_rate"] = rate;
    report["ci95_halfwidth"] = hw;
    report["first_divergence"] = divergence;
    report["total_seconds"] = total_s;
    report["seconds_per_pair"] = total_s / n;

    std::filesystem::path out(cfg.out_dir);
    write_file(out / "paired.csv", csv.str());
    write_file(out / "paired.json", report.dump(2) + "\n");

    std::cout << "paired trials: " << cfg.trials << "  match rate: " << rate << " +/- " << hw
              << "\n";
    for (const auto& [stage, count] : divergence)
        std::cout << "  first divergence at " << stage << ": " << count << "\n";
    std::cout << "  " << total_s / n << " s/pair\n";
    return 0;
}

int cmd_bench(const RunConfig& cfg) {
    DistributionSource source = make_source(cfg.source);
    std::filesystem::create_directories(cfg.out_dir);

    std::ostringstream csv;
    csv << "stage,seconds\n";
    SharedRandomness internal(cfg.seed);
    RngStream data_rng = SharedRandomness(mix64(cfg.seed) ^ 0x9e3779b97f4a7c15ull)
                             .child("bench-data")
                             .stream();
    NormSpec spec{NormFamily::L2, cfg.p, source.dim()};

    auto timed = [&](const char* name, auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        csv << name << "," << secs << "\n";
        std::cout << name << ": " << secs << " s\n";
    };

    OptEstimate opt;
    timed("opt_estimate", [&] {
        opt = estimate_opt_relative(source, cfg.k, spec, 1.0, cfg.eps, cfg.rho / 3, cfg.delta / 3,
                                    data_rng, internal.child("opt"), cfg.budget.opt);
    });
    WeightedCoreset cs;
    timed("coreset", [&] {
        CoresetParams cp;
        cp.eps = cfg.eps / 2;
        cp.p = cfg.p;
        cp.k = cfg.k;
        cp.rho = cfg.rho / 3;
        cp.delta = cfg.delta / 3;
        cp.Lambda = opt.Lambda;
        cp.rho_mass = cfg.rho / 3;
        cp.delta_mass = cfg.delta / 3;
        cp.budget_scale = cfg.budget.coreset_budget_scale;
        cp.level_sample_cap = cfg.budget.coreset_sample_cap;
        cp.mass_eps_floor = cfg.budget.mass_eps_floor;
        cs = build_coreset(source, cp, spec, data_rng, internal.child("coreset"));
    });
    timed("oracle", [&] {
        RngStream rng = internal.child("oracle").stream();
        weighted_kpp_lloyd(coreset_point_set(cs), cfg.k, spec, rng, cfg.budget.lloyd_iters);
    });

    write_file(std::filesystem::path(cfg.out_dir) / "bench.csv", csv.str());
    return 0;
}

int cmd_gen(const RunConfig& cfg) {
    DistributionSource source = make_source(cfg.source);
    std::filesystem::create_directories(cfg.out_dir);
    RngStream rng = SharedRandomness(cfg.seed).child("gen").stream();
    std::vector<Point> pts = source.sample(cfg.n_samples, rng).points;

    std::ostringstream os;
    os.precision(17);
    for (int j = 0; j < source.dim(); ++j) os << (j ? "," : "") << "x" << j;
    os << "\n";
    for (const auto& x : pts) {
        for (std::size_t j = 0; j < x.size(); ++j) os << (j ? "," : "") << x[j];
        os << "\n";
    }
    std::filesystem::path out(cfg.out_dir);
    write_file(out / "data.csv", os.str());
    ordered_json sidecar;
    sidecar["config"] = cfg.raw;
    sidecar["n"] = cfg.n_samples;
    write_file(out / "data.json", sidecar.dump(2) + "\n");
    std::cout << "wrote " << (out / "data.csv").string() << " (" << pts.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"replicable statistical clustering"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> trials;
    std::optional<double> budget_scale;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--seed", seed, "master seed override");
        sub->add_option("--out", out, "output directory override");
        sub->add_option("--trials", trials, "paired-trial count override");
        sub->add_option("--budget-scale", budget_scale, "sample budget multiplier override");
    };
    CLI::App* run = app.add_subcommand("run", "execute one pipeline, write artifacts");
    CLI::App* paired = app.add_subcommand("paired", "paired replicability trials");
    CLI::App* bench = app.add_subcommand("bench", "per-stage wall-clock timing");
    CLI::App* gen = app.add_subcommand("gen", "sample a data CSV from the source");
    for (CLI::App* sub : {run, paired, bench, gen}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg = load_config(config_path, seed, out, trials, budget_scale);
        if (run->parsed()) return cmd_run(cfg);
        if (paired->parsed()) return cmd_paired(cfg);
        if (bench->parsed()) return cmd_bench(cfg);
        if (gen->parsed()) return cmd_gen(cfg);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
}
