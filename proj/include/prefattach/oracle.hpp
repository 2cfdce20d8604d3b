#pragma once

// Exact inclusion probabilities by brute-force enumeration in rational
// arithmetic, plus seeded Monte Carlo estimates in the same table shape.

#include "prefattach/design.hpp"
#include "prefattach/rational.hpp"
#include "prefattach/rng.hpp"
#include "prefattach/sampling.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace prefattach {

// Enumeration budgets. Exceeding one throws EnumerationTooLarge.
inline constexpr std::size_t kMaxDrawByDrawPopulation = 12;
inline constexpr std::size_t kMaxDrawByDrawSample = 4;
inline constexpr std::size_t kMaxConditionalPoissonPopulation = 20;
inline constexpr std::size_t kMaxRandomSystematicPopulation = 8;

using IndexTuple = std::vector<std::size_t>;

struct InclusionTable {
    std::size_t m = 0;
    std::vector<Weight> weights;
    std::vector<Rational> first_order;
    // Every sorted pair (zeros included) and every tuple of order 3..min(m, 4)
    // with positive probability. Deeper orders come from `samples`.
    std::map<IndexTuple, Rational> joint;
    // Every sample with positive probability.
    std::map<Sample, Rational> samples;
    // False for Monte Carlo estimates (count / reps).
    bool exact = true;

    // Order 1 reads first_order; order >= 2 reads joint. Unsorted input is fine.
    Rational probability(std::span<const std::size_t> tuple) const;
    Rational pair(std::size_t i, std::size_t j) const;
};

// Derives first-order and joint probabilities from a distribution over
// samples of size m.
InclusionTable table_from_distribution(std::vector<Weight> weights, std::size_t m,
                                       std::map<Sample, Rational> distribution, bool exact);

InclusionTable exact_dbd(const WeightedPopulation& pop, std::size_t m);
InclusionTable exact_cp(const WeightedPopulation& pop, std::size_t m);
InclusionTable exact_systematic(const OrderedWeightArray& arr, std::size_t m,
                                SystematicMode mode = SystematicMode::Linear);
InclusionTable exact_random_systematic(const WeightedPopulation& pop, std::size_t m,
                                       SystematicMode mode = SystematicMode::Linear);

// pi_ij of random systematic sampling (linear traversal) without
// enumerating permutations: only the weight before the first of the two and
// the weight between them matter, and their joint law under a uniform
// shuffle follows from counting how the other items split into the three
// gaps. Cost is polynomial in the class sizes of equal weights, so it scales
// to populations of hundreds when few distinct weights occur.
Rational random_systematic_joint(const WeightedPopulation& pop, std::size_t m, std::size_t i,
                                 std::size_t j);

// The array an ordered systematic design would use on a bare population.
// DegreeDescending sorts by (weight desc, index asc); AgeOrder is index
// order; RomanticCycle has no meaning without growth history.
OrderedWeightArray arrange_population(const WeightedPopulation& pop, OrderPolicy order);

// One draw of `design` on a bare population.
Sample draw_sample(const DesignSpec& design, const WeightedPopulation& pop, std::size_t m, Rng& rng);

// Frequencies of `reps` independent draws; exact == false.
InclusionTable monte_carlo_inclusion(const DesignSpec& design, const WeightedPopulation& pop,
                                     std::size_t m, std::uint64_t reps, Rng& rng);

// The heavy-node example: one weight 2 and n - 1 weights 1, m = 2.
struct Table1Row {
    std::size_t n = 0;
    Rational strpips;
    Rational draw_by_draw;
    Rational conditional_poisson;
    Rational draw_by_draw_difference;
    Rational conditional_poisson_difference;
    Rational draw_by_draw_ratio;
    Rational conditional_poisson_ratio;
};

Table1Row table1_closed_forms(std::size_t n);

struct MarginalizationCheck {
    bool ok = false;
    Rational max_residual;
};

// Checks sum_i pi_i = m and, for every tuple T of order k - 1 < m,
// sum over j not in T of pi_{T+j} = (m - k + 1) * pi_T.
MarginalizationCheck check_marginalization(const InclusionTable& table);

// {"m", "weights", "first_order", "joint", "exact"}, tuples sorted.
nlohmann::json to_json(const InclusionTable& table);

}  // namespace prefattach
