// pagraph: command line front end for the preferential attachment toolkit.
//
// Subcommands cover graph sampling (generate), exact small-n enumeration
// (enumerate), exact DP laws (law), Monte Carlo moments (simulate), the
// size-bias coupling (couple), rate fits across n (clt), the variance bound
// at a single n (bound), and degree-distribution comparisons (degree-dist).
//
// Exit codes carry operational status only: 0 success, 1 I/O failure,
// 2 configuration or validation error. Statistical outcomes (a large TV
// distance, a failed fit) never affect the exit code; consumers read them
// from the JSON payload. Every JSON payload embeds the resolved
// configuration and the wall-clock time, and is otherwise byte-identical
// across reruns and thread counts.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pag/enumerate.hpp"
#include "pag/exact_law.hpp"
#include "pag/generate.hpp"
#include "pag/graph.hpp"
#include "pag/parallel.hpp"
#include "pag/rng.hpp"
#include "pag/serialize.hpp"
#include "pag/size_bias.hpp"
#include "pag/stein.hpp"

namespace {

using pag::ordered_json;

// Default master seed (0xDA2009 = 14295049); override with --seed.
constexpr uint64_t kDefaultSeed = 0xDA2009;

// Keeping the law table emission bounded; beyond this the payload would be
// tens of megabytes and the DP alone is not the bottleneck anyway.
constexpr uint32_t kLawTableMaxN = 4096;

// Equal total work per rate-fit point: reps * n is held near this constant,
// which reproduces the default schedule 20000, 10000, 5000, 2500, 1250 on
// the default grid 256..4096.
constexpr uint64_t kRateWorkBudget = 5'120'000;
constexpr uint64_t kRateMinReps = 200;

struct RunConfig {
    std::string subcommand;
    std::string f_spec;
    uint32_t n = 0;
    std::vector<uint32_t> n_list;
    uint64_t reps = 0;
    std::vector<uint64_t> reps_list;
    uint64_t outer_reps = 0;
    uint64_t inner_reps = 0;
    std::string seed_text = "0xDA2009";
    uint64_t seed = kDefaultSeed;
    std::string out;
    std::string format;
    uint32_t threads = 0;
    std::string variant = "grouped";
    bool force = false;
    uint32_t vertex = 0;
    bool has_vertex = false;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

uint64_t parse_seed(const std::string& text) {
    try {
        size_t pos = 0;
        const uint64_t value = std::stoull(text, &pos, 0);
        if (pos != text.size()) throw ConfigError("trailing characters in seed '" + text + "'");
        return value;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse seed '" + text + "'");
    }
}

pag::GenVariant parse_variant(const std::string& text) {
    if (text == "naive") return pag::GenVariant::Naive;
    if (text == "grouped") return pag::GenVariant::Grouped;
    throw ConfigError("unknown variant '" + text + "' (expected naive or grouped)");
}

uint32_t default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<uint32_t>(hc);
}

// Fields are emitted in a fixed order; absent options are omitted entirely
// so the payload stays stable.
ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["subcommand"] = cfg.subcommand;
    j["f"] = cfg.f_spec;
    if (!cfg.n_list.empty()) {
        j["n_list"] = cfg.n_list;
    } else {
        j["n"] = cfg.n;
    }
    if (!cfg.reps_list.empty()) j["reps_list"] = cfg.reps_list;
    if (cfg.reps > 0) j["reps"] = cfg.reps;
    if (cfg.outer_reps > 0) j["outer_reps"] = cfg.outer_reps;
    if (cfg.inner_reps > 0) j["inner_reps"] = cfg.inner_reps;
    j["seed"] = cfg.seed;
    if (!cfg.out.empty()) j["out"] = cfg.out;
    j["format"] = cfg.format;
    j["threads"] = cfg.threads;
    if (cfg.subcommand == "generate" || cfg.subcommand == "simulate") j["variant"] = cfg.variant;
    if (cfg.subcommand == "enumerate") j["force"] = cfg.force;
    if (cfg.has_vertex) j["vertex"] = cfg.vertex;
    return j;
}

// Returns 0 or 1 (I/O failure). Empty path means stdout.
int write_text(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return std::cout ? 0 : 1;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return 1;
    }
    out << payload;
    out.close();
    if (!out) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return 1;
    }
    return 0;
}

int emit_report(const RunConfig& cfg, const ordered_json& report, double elapsed_seconds) {
    ordered_json envelope;
    envelope["config"] = config_json(cfg);
    envelope["report"] = report;
    envelope["elapsed_seconds"] = elapsed_seconds;
    return write_text(cfg.out, envelope.dump(2) + "\n");
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_generate(RunConfig& cfg, const pag::AttachmentFunction& f) {
    if (cfg.format != "csv" && cfg.format != "dot")
        throw ConfigError("generate exports csv or dot, not '" + cfg.format + "'");
    pag::GenConfig gen;
    gen.n = cfg.n;
    gen.seed = cfg.seed;
    gen.variant = parse_variant(cfg.variant);
    const pag::Graph g = pag::generate(f, gen);
    if (!cfg.out.empty()) {
        const auto format = cfg.format == "dot" ? pag::ExportFormat::Dot : pag::ExportFormat::EdgeCsv;
        const int rc = write_text(cfg.out, pag::export_graph(g, format));
        if (rc != 0) return rc;
    }
    ordered_json summary;
    summary["n"] = g.n;
    summary["edges"] = g.edges.size();
    summary["w"] = pag::isolated_count(g);
    std::cout << summary.dump() << "\n";
    return std::cout ? 0 : 1;
}

int cmd_enumerate(const RunConfig& cfg, const pag::AttachmentFunction& f,
                  const std::chrono::steady_clock::time_point& start) {
    const uint32_t cap = cfg.force ? pag::kEnumerateForcedMaxN : pag::kEnumerateMaxN;
    if (cfg.n > cap) {
        throw ConfigError("enumerate handles n <= " + std::to_string(pag::kEnumerateMaxN) +
                          " (n <= " + std::to_string(pag::kEnumerateForcedMaxN) +
                          " with --force); got n = " + std::to_string(cfg.n));
    }
    const pag::ExactEnumeration en = pag::enumerate_exact(f, cfg.n, cfg.force);
    return emit_report(cfg, pag::to_json(en), seconds_since(start));
}

int cmd_law(const RunConfig& cfg, const pag::AttachmentFunction& f,
            const std::chrono::steady_clock::time_point& start) {
    ordered_json report;
    report["exact_mean"] = pag::exact_mean_isolated(f, cfg.n);
    if (cfg.has_vertex) {
        if (cfg.vertex < 1 || cfg.vertex > cfg.n)
            throw ConfigError("--vertex must lie in 1..n");
        if (cfg.n > kLawTableMaxN)
            throw ConfigError("--vertex law tables are limited to n <= " +
                              std::to_string(kLawTableMaxN));
        report["vertex"] = cfg.vertex;
        report["theta"] = pag::isolation_prob(f, cfg.vertex, cfg.n);
        report["prob_indegree_zero"] = pag::prob_indegree_zero(f, cfg.vertex, cfg.n);
        report["outdegree_zero_prob"] = pag::outdegree_zero_prob(f, cfg.vertex);
        report["indegree_law"] = pag::to_json(pag::indegree_law(f, cfg.vertex, cfg.n));
    }
    return emit_report(cfg, report, seconds_since(start));
}

int cmd_simulate(const RunConfig& cfg, const pag::AttachmentFunction& f,
                 const std::chrono::steady_clock::time_point& start) {
    const pag::McReport rep = pag::simulate_moments(f, cfg.n, cfg.reps, cfg.seed, cfg.threads,
                                                    parse_variant(cfg.variant));
    return emit_report(cfg, pag::to_json(rep), seconds_since(start));
}

int cmd_couple(const RunConfig& cfg, const pag::AttachmentFunction& f,
               const std::chrono::steady_clock::time_point& start) {
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("couple emits csv or json, not '" + cfg.format + "'");
    const pag::CouplingContext ctx(f, cfg.n);
    std::vector<pag::CouplingSample> samples(cfg.reps);
    pag::parallel_for(cfg.reps, cfg.threads, [&](uint64_t r) {
        samples[r] = ctx.sample(pag::mix_seed(cfg.seed, r));
    });
    if (cfg.format == "csv") return write_text(cfg.out, pag::couple_csv(samples));

    uint64_t sum_w = 0, sum_ws = 0, sum_d = 0, sum_deg_pos = 0, sum_r = 0;
    for (const auto& s : samples) {
        sum_w += s.w;
        sum_ws += s.w_s;
        sum_d += s.d;
        sum_deg_pos += s.deg_pos;
        sum_r += s.r;
    }
    const double reps = static_cast<double>(cfg.reps);
    ordered_json report;
    report["reps"] = cfg.reps;
    report["mean_w"] = static_cast<double>(sum_w) / reps;
    report["mean_w_s"] = static_cast<double>(sum_ws) / reps;
    report["mean_d"] = static_cast<double>(sum_d) / reps;
    report["mean_deg_pos"] = static_cast<double>(sum_deg_pos) / reps;
    report["mean_r"] = static_cast<double>(sum_r) / reps;
    report["exact_mean"] = ctx.isolation().mean();
    return emit_report(cfg, report, seconds_since(start));
}

int cmd_clt(RunConfig& cfg, const pag::AttachmentFunction& f,
            const std::chrono::steady_clock::time_point& start) {
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("clt emits csv or json, not '" + cfg.format + "'");
    if (cfg.n_list.empty()) cfg.n_list = {256, 512, 1024, 2048, 4096};
    if (!cfg.reps_list.empty() && cfg.reps_list.size() != cfg.n_list.size())
        throw ConfigError("--reps-list must match --n-list in length");
    std::vector<uint64_t> reps(cfg.n_list.size());
    for (size_t j = 0; j < cfg.n_list.size(); ++j) {
        if (!cfg.reps_list.empty()) {
            reps[j] = cfg.reps_list[j];
        } else if (cfg.reps > 0) {
            reps[j] = cfg.reps;
        } else {
            reps[j] = std::max(kRateMinReps, kRateWorkBudget / cfg.n_list[j]);
        }
    }
    std::vector<pag::RatePoint> points(cfg.n_list.size());
    for (size_t j = 0; j < cfg.n_list.size(); ++j) {
        points[j] = pag::rate_point(f, cfg.n_list[j], reps[j],
                                    pag::mix_seed(cfg.seed, cfg.n_list[j]), cfg.threads);
    }
    const pag::RateFit fit = pag::rate_fit(f, points);
    const pag::RatePrediction pred = pag::theoretical_exponent(f);
    std::fprintf(stderr, "fitted slope %.4f, theoretical exponent %.4f (%s regime%s)\n",
                 fit.slope, fit.theoretical_exponent, pag::regime_name(pred.regime),
                 pred.vacuous ? ", vacuous general bound" : "");
    if (cfg.format == "csv") return write_text(cfg.out, pag::rate_points_csv(points));
    ordered_json report = pag::to_json(fit);
    ordered_json prediction;
    prediction["regime"] = pag::regime_name(pred.regime);
    prediction["exponent_linear"] = pred.exponent_linear;
    prediction["exponent_general"] = pred.exponent_general;
    prediction["vacuous"] = pred.vacuous;
    prediction["log_correction"] = pred.log_correction;
    report["prediction"] = prediction;
    return emit_report(cfg, report, seconds_since(start));
}

int cmd_bound(const RunConfig& cfg, const pag::AttachmentFunction& f,
              const std::chrono::steady_clock::time_point& start) {
    const pag::SteinBoundReport rep =
        pag::stein_bound_terms(f, cfg.n, cfg.outer_reps, cfg.inner_reps, cfg.seed, cfg.threads);
    return emit_report(cfg, pag::to_json(rep), seconds_since(start));
}

int cmd_degree_dist(const RunConfig& cfg, const pag::AttachmentFunction& f,
                    const std::chrono::steady_clock::time_point& start) {
    const pag::DegreeDistReport rep =
        pag::degree_dist_compare(f, cfg.n, cfg.reps, cfg.seed, cfg.threads);
    return emit_report(cfg, pag::to_json(rep), seconds_since(start));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preferential attachment with random outdegree: simulation and exact laws"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.threads = default_threads();

    auto add_common = [&](CLI::App* sub, bool needs_n) {
        sub->add_option("--f", cfg.f_spec,
                        "Attachment rule: linear:<gamma>,<eta> | power:<a>,<b>,<c> | "
                        "const:<c> | table:<v0>,<v1>,...")
            ->required();
        if (needs_n) sub->add_option("--n", cfg.n, "Number of vertices")->required();
        sub->add_option("--seed", cfg.seed_text, "Master seed (decimal or 0x hex)");
        sub->add_option("--out", cfg.out, "Output file (default: stdout)");
        sub->add_option("--threads", cfg.threads, "Worker threads (default: hardware concurrency)");
        return sub;
    };

    CLI::App* generate = add_common(app.add_subcommand("generate", "Sample one graph"), true);
    generate->add_option("--format", cfg.format, "Graph export format: csv | dot");
    generate->add_option("--variant", cfg.variant, "Generator variant: naive | grouped");

    CLI::App* enumerate =
        add_common(app.add_subcommand("enumerate", "Exact law by exhaustive enumeration"), true);
    enumerate->add_flag("--force", cfg.force, "Allow n = 7 (2^21 graphs)");

    CLI::App* law = add_common(app.add_subcommand("law", "Exact DP laws and moments"), true);
    law->add_option("--vertex", cfg.vertex, "Emit the indegree law and isolation data of one vertex")
        ->check(CLI::PositiveNumber);

    CLI::App* simulate =
        add_common(app.add_subcommand("simulate", "Monte Carlo moments of the isolated count"), true);
    simulate->add_option("--reps", cfg.reps, "Replications");
    simulate->add_option("--variant", cfg.variant, "Generator variant: naive | grouped");

    CLI::App* couple =
        add_common(app.add_subcommand("couple", "Size-bias coupling samples"), true);
    couple->add_option("--reps", cfg.reps, "Replications");
    couple->add_option("--format", cfg.format, "Output format: csv | json");

    CLI::App* clt = add_common(app.add_subcommand("clt", "Wasserstein rate fit across n"), false);
    clt->add_option("--n-list", cfg.n_list, "Grid of n values")->delimiter(',');
    clt->add_option("--reps", cfg.reps, "Replications per point (default: equal work per point)");
    clt->add_option("--reps-list", cfg.reps_list, "Per-point replications")->delimiter(',');
    clt->add_option("--format", cfg.format, "Output format: json | csv");

    CLI::App* bound =
        add_common(app.add_subcommand("bound", "Size-bias variance bound at one n"), true);
    bound->add_option("--outer-reps", cfg.outer_reps, "Outer replications (graphs)");
    bound->add_option("--inner-reps", cfg.inner_reps, "Inner replications (couplings per graph)");

    CLI::App* degree_dist = add_common(
        app.add_subcommand("degree-dist", "Empirical degree distributions vs the exact limits"),
        true);
    degree_dist->add_option("--reps", cfg.reps, "Graphs to pool");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();

    // Per-subcommand defaults.
    if (cfg.format.empty()) {
        if (cfg.subcommand == "generate" || cfg.subcommand == "couple") {
            cfg.format = "csv";
        } else {
            cfg.format = "json";
        }
    }
    if (cfg.reps == 0 && cfg.reps_list.empty()) {
        if (cfg.subcommand == "simulate" || cfg.subcommand == "couple") cfg.reps = 10000;
        if (cfg.subcommand == "degree-dist") cfg.reps = 10;
    }
    if (cfg.outer_reps == 0) cfg.outer_reps = 500;
    if (cfg.inner_reps == 0) cfg.inner_reps = 20;
    if (cfg.threads == 0) cfg.threads = 1;
    cfg.has_vertex = law->count("--vertex") > 0;

    const auto start = std::chrono::steady_clock::now();
    try {
        cfg.seed = parse_seed(cfg.seed_text);
        const pag::AttachmentFunction f = pag::parse_spec(cfg.f_spec);

        if (cfg.subcommand == "generate") return cmd_generate(cfg, f);
        if (cfg.subcommand == "enumerate") return cmd_enumerate(cfg, f, start);
        if (cfg.subcommand == "law") return cmd_law(cfg, f, start);
        if (cfg.subcommand == "simulate") return cmd_simulate(cfg, f, start);
        if (cfg.subcommand == "couple") return cmd_couple(cfg, f, start);
        if (cfg.subcommand == "clt") return cmd_clt(cfg, f, start);
        if (cfg.subcommand == "bound") return cmd_bound(cfg, f, start);
        if (cfg.subcommand == "degree-dist") return cmd_degree_dist(cfg, f, start);
        std::cerr << "error: unknown subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pag::ParseError& e) {
        std::cerr << "error: bad --f: " << e.what() << " (position " << e.position << ")\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
