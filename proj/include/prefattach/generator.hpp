#pragma once

// Preferential attachment growth driven by a sampling design.
//
// The process starts from K_m (ids 0..m-1). Each step samples m distinct
// existing vertices with weights equal to their degrees at the start of the
// step and links a newborn to all of them.

#include "prefattach/design.hpp"
#include "prefattach/graph.hpp"
#include "prefattach/rational.hpp"
#include "prefattach/rng.hpp"
#include "prefattach/sampling.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prefattach {

struct GrowthParams {
    std::size_t n = 0;  // final vertex count
    std::size_t m = 1;  // edges per newborn; the initial clique has m vertices

    void validate() const;
};

// Array arrangement after a step. `arr` carries the step-start degrees;
// the result carries the updated ones (targets +1, newborn |targets|).
//   DegreeDescending: full re-sort by (degree desc, id asc).
//   AgeOrder: newborn appended on the right.
//   RomanticCycle: newborn id mod 4 picks left (0), right (1) or middle
//     (2, 3); middle is the leftmost slot minimizing |left sum - right sum|
//     over the updated weights.
OrderedWeightArray ordered_array_update(OrderPolicy policy, const OrderedWeightArray& arr,
                                        VertexId newborn, std::span<const VertexId> targets);

// Initial array on the clique K_m for a policy.
OrderedWeightArray initial_array(OrderPolicy policy, std::span<const std::uint32_t> degrees);

// Per-design sampling state that follows a growing degree sequence.
// Call draw() with the step-start degrees, then commit() once the newborn
// has been appended and the target degrees incremented.
class AttachmentSampler {
public:
    AttachmentSampler(const DesignSpec& design, std::size_t m);
    ~AttachmentSampler();
    AttachmentSampler(AttachmentSampler&&) noexcept;
    AttachmentSampler& operator=(AttachmentSampler&&) noexcept;

    // Sets up the state for an initial degree sequence.
    void reset(std::span<const std::uint32_t> degrees);
    // m distinct vertex ids, sorted. Does not change the state, so repeated
    // draws from the same state are independent replays.
    void draw(std::span<const std::uint32_t> degrees, Rng& rng, std::vector<VertexId>& out);
    void commit(std::span<const std::uint32_t> degrees, std::span<const VertexId> targets);

    const DesignSpec& design() const noexcept;
    // The current array of an ordered systematic design, else nullptr.
    const OrderedWeightArray* array() const noexcept;

private:
    struct State;
    std::unique_ptr<State> state_;
};

// A growing graph together with its sampler and random stream.
class GrowthProcess {
public:
    GrowthProcess(const GrowthParams& params, const DesignSpec& design, Rng rng);

    const Graph& graph() const noexcept { return graph_; }
    const AttachmentSampler& sampler() const noexcept { return sampler_; }
    bool done() const noexcept { return graph_.vertex_count() >= params_.n; }
    // One newborn; returns its targets.
    std::vector<VertexId> step();
    void run();

private:
    GrowthParams params_;
    Graph graph_;
    AttachmentSampler sampler_;
    Rng rng_;
    std::vector<VertexId> targets_;
};

// Stream make_stream(design.seed, 0).
Graph generate(const GrowthParams& params, const DesignSpec& design);

// One draw of the next step's targets on g without growing it. The sampler
// must be in sync with g.
Sample attachment_step(const Graph& g, std::size_t m, AttachmentSampler& sampler, Rng& rng);

// Canonical form of a small graph: the lexicographically smallest upper
// triangle adjacency string over all vertex relabelings. Limited to 8
// vertices.
std::string certificate(const Graph& g);

struct OutcomeDistribution {
    std::map<std::string, Rational> probabilities;
    bool exact = true;
    std::uint64_t reps = 0;  // Monte Carlo only
};

inline constexpr std::size_t kMaxOutcomeVertices = 7;
inline constexpr std::uint64_t kDefaultOutcomeReps = 200'000;

// Distribution of the isomorphism class of the final graph for n <= 7,
// m = 2. Exact by walking the outcome tree for every design with an exact
// oracle; Chao falls back to Monte Carlo with `reps` replays.
OutcomeDistribution outcome_distribution(const GrowthParams& params, const DesignSpec& design,
                                         std::uint64_t reps = kDefaultOutcomeReps);

nlohmann::json to_json(const OutcomeDistribution& dist);

// The three outcomes of growing G0 (degrees 3,3,2,2) by one vertex.
struct Table3Classes {
    std::string mixed;        // G1: one heavy and one light target
    std::string light_light;  // G2
    std::string heavy_heavy;  // G3
};
Table3Classes table3_classes();

// Side-by-side comparison of the exact n = 5 outcome distributions with the
// published rows.
nlohmann::json table3_report(bool circular = false);

// Second-order probability that the hub and the newest vertex of
// wheel_minus_arc(t) are sampled together (m = 2).
enum class WheelDesign { OrderedAge, RandomSystematic };
Rational wheel_joint_probability(std::size_t t, WheelDesign design,
                                 WheelCenter center = WheelCenter::FirstBorn);

struct WheelRow {
    std::size_t t = 0;
    Rational ordered;
    Rational random;
};
std::vector<WheelRow> wheel_table(std::size_t t_max, WheelCenter center = WheelCenter::FirstBorn);
// Smallest t from which the ordered probability stays 0 up to the last row.
std::optional<std::size_t> wheel_first_zero(std::span<const WheelRow> rows);

}  // namespace prefattach
