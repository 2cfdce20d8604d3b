#include "prefattach/errors.hpp"
#include "prefattach/generator.hpp"
#include "prefattach/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace prefattach {

std::string certificate(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 8) {
        throw EnumerationTooLarge("certificates are limited to 8 vertices");
    }
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), VertexId{0});
    std::string best;
    std::string bits(n * (n - (n > 0 ? 1 : 0)) / 2, '0');
    do {
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                bits[k++] = g.has_edge(perm[i], perm[j]) ? '1' : '0';
            }
        }
        if (best.empty() || bits < best) {
            best = bits;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::to_string(n) + ":" + best;
}

namespace {

std::string labeled_key(const Graph& g, const OrderedWeightArray* arr) {
    std::string key;
    for (const auto& [u, v] : g.edge_list()) {
        key += std::to_string(u) + "-" + std::to_string(v) + ",";
    }
    if (arr != nullptr) {
        key += "|";
        for (const auto& e : arr->entries()) {
            key += std::to_string(e.index) + ",";
        }
    }
    return key;
}

struct TreeNode {
    Graph graph;
    OrderedWeightArray arr;
    Rational probability;
};

std::map<Sample, Rational> step_distribution(const DesignSpec& design, const TreeNode& node,
                                             std::size_t m) {
    const Graph& g = node.graph;
    if (g.vertex_count() == m) {
        std::vector<std::size_t> all(m);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return {{Sample(all), Rational(1)}};
    }
    std::vector<Weight> weights(g.degrees().begin(), g.degrees().end());
    const WeightedPopulation pop(weights);
    switch (design.kind) {
        case DesignKind::DrawByDraw:
            return exact_dbd(pop, m).samples;
        case DesignKind::ConditionalPoisson:
            return exact_cp(pop, m).samples;
        case DesignKind::OrderedSystematic:
            return exact_systematic(node.arr, m, design.systematic_mode()).samples;
        case DesignKind::RandomSystematic:
            return exact_random_systematic(pop, m, design.systematic_mode()).samples;
        case DesignKind::StrPipsChao:
            break;
    }
    throw std::logic_error("no exact oracle for this design");
}

Rational canonical(Rational r) {
    r.canonicalize();
    return r;
}

}  // namespace

OutcomeDistribution outcome_distribution(const GrowthParams& params, const DesignSpec& design,
                                         std::uint64_t reps) {
    params.validate();
    design.validate(params.m);
    if (params.n > kMaxOutcomeVertices) {
        throw EnumerationTooLarge("outcome distributions are limited to " +
                                  std::to_string(kMaxOutcomeVertices) + " vertices");
    }
    OutcomeDistribution dist;
    if (design.kind == DesignKind::StrPipsChao) {
        if (reps == 0) {
            throw std::invalid_argument("reps must be at least 1");
        }
        dist.exact = false;
        dist.reps = reps;
        std::unordered_map<std::string, std::string> cache;
        std::map<std::string, std::uint64_t> counts;
        for (std::uint64_t r = 0; r < reps; ++r) {
            GrowthProcess process(params, design, make_stream(design.seed, r));
            process.run();
            const std::string key = labeled_key(process.graph(), nullptr);
            auto it = cache.find(key);
            if (it == cache.end()) {
                it = cache.emplace(key, certificate(process.graph())).first;
            }
            ++counts[it->second];
        }
        for (const auto& [cert, count] : counts) {
            dist.probabilities.emplace(
                cert, canonical(Rational(BigInt(static_cast<unsigned long>(count)),
                                         BigInt(static_cast<unsigned long>(reps)))));
        }
        return dist;
    }

    const Graph start = complete_graph(params.m);
    std::vector<TreeNode> level{{start,
                                 design.kind == DesignKind::OrderedSystematic
                                     ? initial_array(*design.order, start.degrees())
                                     : OrderedWeightArray(),
                                 Rational(1)}};
    for (std::size_t size = params.m; size < params.n; ++size) {
        std::map<std::string, std::size_t> index;
        std::vector<TreeNode> next;
        for (const auto& node : level) {
            for (const auto& [sample, p] : step_distribution(design, node, params.m)) {
                TreeNode child{node.graph, node.arr, node.probability * p};
                std::vector<VertexId> targets(sample.begin(), sample.end());
                const VertexId born = child.graph.add_newborn(targets);
                const OrderedWeightArray* arr = nullptr;
                if (design.kind == DesignKind::OrderedSystematic) {
                    child.arr = ordered_array_update(*design.order, node.arr, born, targets);
                    arr = &child.arr;
                }
                const std::string key = labeled_key(child.graph, arr);
                auto it = index.find(key);
                if (it == index.end()) {
                    index.emplace(key, next.size());
                    next.push_back(std::move(child));
                } else {
                    next[it->second].probability += child.probability;
                }
            }
        }
        level = std::move(next);
    }
    for (const auto& node : level) {
        dist.probabilities[certificate(node.graph)] += node.probability;
    }
    return dist;
}

nlohmann::json to_json(const OutcomeDistribution& dist) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [cert, p] : dist.probabilities) {
        out[cert] = to_fraction_string(p);
    }
    return out;
}

namespace {

Graph g0() {
    Graph g = complete_graph(2);
    const VertexId both[2] = {0, 1};
    g.add_newborn(both);
    g.add_newborn(both);
    return g;
}

std::string grown(VertexId a, VertexId b) {
    Graph g = g0();
    const VertexId targets[2] = {a, b};
    g.add_newborn(targets);
    return certificate(g);
}

}  // namespace

Table3Classes table3_classes() {
    // G0 has heavy vertices 0, 1 (degree 3) and light vertices 2, 3.
    return {grown(0, 2), grown(2, 3), grown(0, 1)};
}

nlohmann::json table3_report(bool circular) {
    const Table3Classes classes = table3_classes();
    const GrowthParams params{5, 2};
    DesignSpec ordered = DesignSpec::ordered_systematic(OrderPolicy::DegreeDescending);
    DesignSpec random = DesignSpec::random_systematic();
    ordered.circular = circular;
    random.circular = circular;

    auto row = [&](const OutcomeDistribution& dist, const Rational& g1, const Rational& g2,
                   const Rational& g3) {
        auto lookup = [&](const std::string& cert) {
            auto it = dist.probabilities.find(cert);
            return it == dist.probabilities.end() ? Rational(0) : it->second;
        };
        const Rational c1 = lookup(classes.mixed);
        const Rational c2 = lookup(classes.light_light);
        const Rational c3 = lookup(classes.heavy_heavy);
        nlohmann::json out;
        out["computed"] = {{"G1", to_fraction_string(c1)},
                           {"G2", to_fraction_string(c2)},
                           {"G3", to_fraction_string(c3)}};
        out["published"] = {{"G1", to_fraction_string(g1)},
                            {"G2", to_fraction_string(g2)},
                            {"G3", to_fraction_string(g3)}};
        out["match"] = c1 == g1 && c2 == g2 && c3 == g3;
        return out;
    };

    nlohmann::json report;
    report["mode"] = circular ? "circular" : "linear";
    report["classes"] = {{"G1", classes.mixed}, {"G2", classes.light_light}, {"G3", classes.heavy_heavy}};
    report["ordered"] = row(outcome_distribution(params, ordered), canonical(Rational(1, 5)),
                            canonical(Rational(2, 5)), canonical(Rational(2, 5)));
    report["random"] = row(outcome_distribution(params, random), canonical(Rational(16, 30)),
                           canonical(Rational(4, 30)), canonical(Rational(10, 30)));

    // The sample distribution on G0 itself, by array position.
    const Graph base = g0();
    std::vector<Weight> weights(base.degrees().begin(), base.degrees().end());
    const auto arr = arrange_population(WeightedPopulation(weights), OrderPolicy::DegreeDescending);
    const auto table = exact_systematic(arr, 2, circular ? SystematicMode::Circular : SystematicMode::Linear);
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& [sample, p] : table.samples) {
        samples.push_back({{"vertices", std::vector<std::size_t>(sample.begin(), sample.end())},
                           {"p", to_fraction_string(p)}});
    }
    report["ordered_samples_on_g0"] = samples;
    return report;
}

}  // namespace prefattach
