// pa_sampling: generate preferential attachment graphs under different
// sampling designs, probe exact inclusion probabilities, run experiments.

#include "prefattach/errors.hpp"
#include "prefattach/experiments.hpp"
#include "prefattach/generator.hpp"
#include "prefattach/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace prefattach;

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 3;

// Thrown for flag combinations that are rejected before any work starts.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string design = "chao";
    std::string order;
    bool circular = false;
    std::string n_text;
    std::size_t m = 2;
    std::uint64_t reps = 0;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
    std::string out;
    std::string weights;
    std::size_t t_max = 200;
    std::string center = "first";
    std::size_t top = 10;
    bool strict_top = false;
};

DesignSpec design_from(const Options& o, std::size_t m) {
    DesignSpec spec;
    try {
        spec.kind = parse_design_kind(o.design);
        if (!o.order.empty()) {
            spec.order = parse_order_policy(o.order);
        }
        spec.circular = o.circular;
        spec.seed = o.seed;
        spec.validate(m);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return spec;
}

std::size_t parse_count(const std::string& text, const char* flag) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw UsageError(std::string("invalid value for ") + flag + ": " + text);
    }
}

std::size_t single_n(const Options& o, std::size_t fallback) {
    return o.n_text.empty() ? fallback : parse_count(o.n_text, "--n");
}

// "a..b" or a single value.
std::pair<std::size_t, std::size_t> n_range(const Options& o, std::size_t lo, std::size_t hi) {
    if (o.n_text.empty()) {
        return {lo, hi};
    }
    const auto dots = o.n_text.find("..");
    if (dots == std::string::npos) {
        const std::size_t n = parse_count(o.n_text, "--n");
        return {n, n};
    }
    const std::size_t a = parse_count(o.n_text.substr(0, dots), "--n");
    const std::size_t b = parse_count(o.n_text.substr(dots + 2), "--n");
    if (a > b) {
        throw UsageError("empty --n range");
    }
    return {a, b};
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    return out;
}

ProgressFn stderr_progress(const char* label) {
    return [label](std::uint64_t done, std::uint64_t total) {
        std::fprintf(stderr, "\r%s: %llu/%llu", label, static_cast<unsigned long long>(done),
                     static_cast<unsigned long long>(total));
        if (done == total) {
            std::fputc('\n', stderr);
        }
        std::fflush(stderr);
    };
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_generate(const Options& o) {
    const GrowthParams params{single_n(o, 1000), o.m};
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const DesignSpec design = design_from(o, o.m);
    const Graph g = generate(params, design);
    const std::string path = o.out.empty() ? "graph.edges" : o.out;
    auto out = open_out(path);
    write_edge_list(out, g);
    std::uint32_t max_degree = 0;
    for (auto d : g.degrees()) {
        max_degree = std::max(max_degree, d);
    }
    print_json({{"n", g.vertex_count()}, {"edges", g.edge_count()}, {"max_degree", max_degree},
                {"out", path}});
    return 0;
}

int cmd_probe(const Options& o) {
    if (o.weights.empty()) {
        throw UsageError("--weights is required");
    }
    std::vector<Rational> values;
    std::stringstream ss(o.weights);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            values.push_back(parse_fraction(item));
        } catch (const std::exception&) {
            throw UsageError("invalid weight: " + item);
        }
        if (values.back() < 0) {
            throw UsageError("weights must be non-negative");
        }
    }
    const DesignSpec design = design_from(o, o.m);
    if (design.order == OrderPolicy::RomanticCycle) {
        throw UsageError("the romantic order needs a growing graph; use degree or age");
    }
    WeightedPopulation pop = [&] {
        try {
            return WeightedPopulation::from_rationals(values);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    InclusionTable table;
    const bool monte_carlo = o.reps > 0 || design.kind == DesignKind::StrPipsChao;
    if (monte_carlo) {
        Rng rng = make_stream(design.seed, 0);
        table = monte_carlo_inclusion(design, pop, o.m, o.reps > 0 ? o.reps : 1'000'000, rng);
    } else {
        switch (design.kind) {
            case DesignKind::DrawByDraw:
                table = exact_dbd(pop, o.m);
                break;
            case DesignKind::ConditionalPoisson:
                table = exact_cp(pop, o.m);
                break;
            case DesignKind::OrderedSystematic:
                table = exact_systematic(arrange_population(pop, *design.order), o.m,
                                         design.systematic_mode());
                break;
            case DesignKind::RandomSystematic:
                table = exact_random_systematic(pop, o.m, design.systematic_mode());
                break;
            case DesignKind::StrPipsChao:
                break;
        }
    }
    const std::string text = to_json(table).dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
    } else {
        auto out = open_out(o.out);
        out << text;
    }
    return 0;
}

int cmd_degree(const Options& o) {
    ExperimentConfig config;
    config.n = single_n(o, 10000);
    config.m = o.m;
    config.reps = o.reps > 0 ? o.reps : 20;
    config.threads = o.threads;
    config.design = design_from(o, o.m);
    config.progress = stderr_progress("degree");
    const auto pooled = pooled_degrees(config);
    const CcdfSeries series = degree_ccdf(pooled);
    const std::string path = o.out.empty() ? "ccdf.csv" : o.out;
    auto out = open_out(path);
    write_ccdf_csv(out, series);
    const SlopeFit fit = ccdf_slope(series, static_cast<std::uint32_t>(config.m));
    print_json({{"design", std::string(to_string(config.design.kind))},
                {"n", config.n},
                {"m", config.m},
                {"runs", config.reps},
                {"slope", fit.slope},
                {"k_min", fit.k_min},
                {"k_cut", fit.k_cut},
                {"points", fit.points},
                {"out", path}});
    return 0;
}

ExperimentConfig growth_config(const Options& o) {
    ExperimentConfig config;
    config.n = single_n(o, 1000);
    config.m = o.m;
    config.reps = o.reps > 0 ? o.reps : 10000;
    config.threads = o.threads;
    config.design = design_from(o, o.m);
    try {
        GrowthParams{config.n, config.m}.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return config;
}

int cmd_ranks(const Options& o) {
    ExperimentConfig config = growth_config(o);
    config.progress = stderr_progress("ranks");
    const RankReport report = growth_statistics(config).ranks;
    const TieRule rule = o.strict_top ? TieRule::UniqueOnly : TieRule::Split;
    const std::string path = o.out.empty() ? "ranks.csv" : o.out;
    auto out = open_out(path);
    write_rank_csv(out, report, o.top, rule);
    print_json({{"design", std::string(to_string(config.design.kind))},
                {"n", config.n},
                {"m", config.m},
                {"reps", config.reps},
                {"ties", o.strict_top ? "unique" : "split"},
                {"top", report.probabilities(o.top, rule)},
                {"out", path}});
    return 0;
}

int cmd_overthrows(const Options& o) {
    ExperimentConfig config = growth_config(o);
    config.progress = stderr_progress("overthrows");
    const OverthrowRecord record = growth_statistics(config).overthrows;
    const std::string path = o.out.empty() ? "overthrows.csv" : o.out;
    auto out = open_out(path);
    write_overthrow_csv(out, record);
    nlohmann::json summary{{"design", std::string(to_string(config.design.kind))},
                           {"n", config.n},
                           {"m", config.m},
                           {"reps", config.reps},
                           {"mean_total", record.mean_total()},
                           {"out", path}};
    try {
        const PowerFit fit = fit_power_law(record, -1.0, 20);
        summary["c"] = fit.c;
        summary["correlation"] = fit.correlation;
    } catch (const InsufficientData& e) {
        summary["correlation"] = nullptr;
    }
    print_json(summary);
    return 0;
}

int cmd_projection(const Options& o) {
    const GrowthParams params{single_n(o, 100), o.m};
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const DesignSpec design = design_from(o, o.m);
    const Graph g = generate(params, design);
    if (g.vertex_count() < 2) {
        throw UsageError("the projection needs at least two vertices");
    }
    const WeightedProjection projection = jaccard_projection(g);
    const std::string path = o.out.empty() ? "projection.csv" : o.out;
    auto out = open_out(path);
    write_projection_csv(out, projection);
    print_json({{"n", g.vertex_count()}, {"nonzero_pairs", projection.entries.size()}, {"out", path}});
    return 0;
}

int cmd_wheel(const Options& o) {
    if (o.t_max < 4) {
        throw UsageError("--t-max must be at least 4");
    }
    if (o.center != "first" && o.center != "second") {
        throw UsageError("--center must be first or second");
    }
    const WheelCenter center = o.center == "first" ? WheelCenter::FirstBorn : WheelCenter::SecondBorn;
    const auto rows = wheel_table(o.t_max, center);
    const std::string path = o.out.empty() ? "wheel.csv" : o.out;
    auto out = open_out(path);
    out << "t,ordered_age,random_systematic\n";
    bool random_positive = true;
    for (const auto& row : rows) {
        out << row.t << ',' << to_fraction_string(row.ordered) << ',' << to_fraction_string(row.random) << '\n';
        random_positive = random_positive && row.random > 0;
    }
    const auto first_zero = wheel_first_zero(rows);
    print_json({{"center", o.center},
                {"t_max", o.t_max},
                {"first_zero", first_zero ? nlohmann::json(*first_zero) : nlohmann::json(nullptr)},
                {"random_all_positive", random_positive},
                {"out", path}});
    return 0;
}

int cmd_table1(const Options& o) {
    const auto [lo, hi] = n_range(o, 3, 12);
    if (lo < 3) {
        throw UsageError("--n must start at 3 or more");
    }
    const std::string path = o.out.empty() ? "table1.csv" : o.out;
    auto out = open_out(path);
    out << "n,strpips,dbd,cp,dbd_difference,cp_difference,dbd_ratio,cp_ratio,oracle_match\n";
    bool all_match = true;
    for (std::size_t n = lo; n <= hi; ++n) {
        const Table1Row row = table1_closed_forms(n);
        std::string match = "skipped";
        if (n <= kMaxDrawByDrawPopulation) {
            std::vector<Weight> weights(n, 1);
            weights[0] = 2;
            const WeightedPopulation pop(weights);
            const bool ok = exact_dbd(pop, 2).first_order[0] == row.draw_by_draw &&
                            exact_cp(pop, 2).first_order[0] == row.conditional_poisson;
            all_match = all_match && ok;
            match = ok ? "yes" : "no";
        }
        out << n << ',' << to_fraction_string(row.strpips) << ',' << to_fraction_string(row.draw_by_draw)
            << ',' << to_fraction_string(row.conditional_poisson) << ','
            << to_fraction_string(row.draw_by_draw_difference) << ','
            << to_fraction_string(row.conditional_poisson_difference) << ','
            << to_fraction_string(row.draw_by_draw_ratio) << ','
            << to_fraction_string(row.conditional_poisson_ratio) << ',' << match << '\n';
    }
    print_json({{"n_from", lo}, {"n_to", hi}, {"oracle_match", all_match}, {"out", path}});
    return 0;
}

int cmd_table3(const Options& o) {
    const nlohmann::json report = table3_report(o.circular);
    const std::string path = o.out.empty() ? "table3.json" : o.out;
    auto out = open_out(path);
    out << report.dump(2) << '\n';
    print_json({{"ordered_match", report["ordered"]["match"]},
                {"random_match", report["random"]["match"]},
                {"ordered_computed", report["ordered"]["computed"]},
                {"ordered_published", report["ordered"]["published"]},
                {"out", path}});
    return 0;
}

void add_design_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--design", o.design, "chao | dbd | cp | ordered-systematic | random-systematic")
        ->check(CLI::IsMember({"chao", "dbd", "cp", "ordered-systematic", "random-systematic"}));
    cmd->add_option("--order", o.order, "degree | age | romantic (ordered-systematic only)")
        ->check(CLI::IsMember({"degree", "age", "romantic"}));
    cmd->add_flag("--circular", o.circular, "circular systematic traversal");
    cmd->add_option("--seed", o.seed, "master seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preferential attachment under unequal probability sampling designs"};
    app.require_subcommand(1);
    Options o;
    int (*handler)(const Options&) = nullptr;

    auto* gen = app.add_subcommand("generate", "grow a graph and write its edge list");
    add_design_flags(gen, o);
    gen->add_option("--n", o.n_text, "final vertex count");
    gen->add_option("--m", o.m, "edges per newborn");
    gen->add_option("--out", o.out, "edge list path (default graph.edges)");
    gen->callback([&] { handler = cmd_generate; });

    auto* probe = app.add_subcommand("probe", "inclusion probabilities of a design on explicit weights");
    add_design_flags(probe, o);
    probe->add_option("--weights", o.weights, "comma-separated integers or p/q")->required();
    probe->add_option("--m", o.m, "sample size");
    probe->add_option("--reps", o.reps, "Monte Carlo draws instead of the exact oracle");
    probe->add_option("--out", o.out, "JSON path (default stdout)");
    probe->callback([&] { handler = cmd_probe; });

    auto* exp = app.add_subcommand("experiment", "run an experiment");
    exp->require_subcommand(1);
    auto experiment = [&](const char* name, const char* help, int (*fn)(const Options&)) {
        auto* sub = exp->add_subcommand(name, help);
        sub->add_option("--out", o.out, "output path");
        sub->callback([&handler, fn] { handler = fn; });
        return sub;
    };
    auto growth_flags = [&](CLI::App* sub) {
        add_design_flags(sub, o);
        sub->add_option("--n", o.n_text, "final vertex count");
        sub->add_option("--m", o.m, "edges per newborn");
        sub->add_option("--reps", o.reps, "repetitions");
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    growth_flags(experiment("degree", "pooled degree CCDF and log-log slope", cmd_degree));
    auto* ranks = experiment("ranks", "top degree rank probabilities of the oldest vertices", cmd_ranks);
    growth_flags(ranks);
    ranks->add_option("--top", o.top, "number of oldest vertices to report");
    ranks->add_flag("--strict-top", o.strict_top, "count only unique maxima");
    growth_flags(experiment("overthrows", "per-size overthrow probabilities", cmd_overthrows));
    auto* projection = experiment("projection", "Jaccard projection of a generated graph", cmd_projection);
    add_design_flags(projection, o);
    projection->add_option("--n", o.n_text, "final vertex count");
    projection->add_option("--m", o.m, "edges per newborn");
    auto* wheel = experiment("wheel", "hub/newest joint probability on the wheel-minus-arc graph", cmd_wheel);
    wheel->add_option("--t-max", o.t_max, "largest graph size");
    wheel->add_option("--center", o.center, "first | second: which clique vertex is the hub");
    auto* t1 = experiment("table1", "heavy-node example closed forms and oracle check", cmd_table1);
    t1->add_option("--n", o.n_text, "n or a range a..b");
    auto* t3 = experiment("table3", "n = 5 outcome classes of the systematic generators", cmd_table3);
    t3->add_flag("--circular", o.circular, "circular systematic traversal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }
    try {
        return handler(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}
