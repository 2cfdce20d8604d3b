#pragma once

// Fixed-size, without-replacement, unequal probability sampling designs.
//
// All designs draw m distinct indices from a population whose sizes are
// non-negative integer weights. They differ in what "proportional to size"
// means:
//   - conditional Poisson: independent inclusion with p_i = m*w_i/W,
//     conditioned on exactly m successes;
//   - draw-by-draw: m successive draws, each proportional to the weight
//     among the items not yet drawn;
//   - strict pips (Chao's stream procedure, random systematic): inclusion
//     probability exactly m*w_i/W.
// Ordered systematic sampling is strict pips as well, but its joint
// inclusion probabilities depend on the order of the array.

#include "prefattach/rational.hpp"
#include "prefattach/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace prefattach {

using Weight = std::int64_t;

// Non-negative integer sizes with a positive total. Rational sizes are
// accepted through from_rationals and scaled to a common denominator, which
// leaves every design unchanged.
class WeightedPopulation {
public:
    explicit WeightedPopulation(std::vector<Weight> weights);
    WeightedPopulation(std::initializer_list<Weight> weights)
        : WeightedPopulation(std::vector<Weight>(weights)) {}

    static WeightedPopulation from_rationals(std::span<const Rational> weights);

    std::span<const Weight> weights() const noexcept { return weights_; }
    Weight weight(std::size_t i) const { return weights_.at(i); }
    Weight total() const noexcept { return total_; }
    std::size_t size() const noexcept { return weights_.size(); }
    std::size_t positive_count() const noexcept { return positive_; }

private:
    std::vector<Weight> weights_;
    Weight total_ = 0;
    std::size_t positive_ = 0;
};

// Unordered set of distinct indices, kept sorted.
class Sample {
public:
    Sample() = default;
    // Sorts; throws std::invalid_argument on duplicates.
    explicit Sample(std::vector<std::size_t> indices);

    std::span<const std::size_t> indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool contains(std::size_t index) const;

    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }

    friend bool operator==(const Sample&, const Sample&) = default;
    friend auto operator<=>(const Sample&, const Sample&) = default;

private:
    std::vector<std::size_t> indices_;
};

// A population laid out in a fixed order along the cumulative-weight axis.
// Entry k covers [offset(k), offset(k) + weight(k)).
class OrderedWeightArray {
public:
    struct Entry {
        std::size_t index;
        Weight weight;
    };

    OrderedWeightArray() = default;
    explicit OrderedWeightArray(std::vector<Entry> entries);

    // Entries in population order.
    static OrderedWeightArray identity(const WeightedPopulation& pop);
    // `order` must be a permutation of 0..pop.size()-1.
    static OrderedWeightArray arranged(const WeightedPopulation& pop,
                                       std::span<const std::size_t> order);

    std::size_t size() const noexcept { return entries_.size(); }
    const Entry& entry(std::size_t position) const { return entries_.at(position); }
    std::span<const Entry> entries() const noexcept { return entries_; }
    Weight offset(std::size_t position) const { return offsets_.at(position); }
    Weight total() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
    std::vector<Weight> weights() const;

    // Mutators keep the cumulative offsets in sync.
    void set_weight(std::size_t position, Weight weight);
    void insert(std::size_t position, Entry entry);
    void push_back(Entry entry) { insert(entries_.size(), entry); }
    std::vector<Entry> release() && { return std::move(entries_); }

private:
    void rebuild_offsets(std::size_t from);

    std::vector<Entry> entries_;
    std::vector<Weight> offsets_;  // size() + 1 values, offsets_[0] == 0
};

// Linear: u in [0, W/m), points u + k*W/m.
// Circular: u in [0, W), points (u + k*W/m) mod W.
enum class SystematicMode { Linear, Circular };

// pi_i = m*w_i/W. Throws InfeasibleStrPips when some pi_i > 1.
std::vector<Rational> target_first_order(const WeightedPopulation& pop, std::size_t m);

// Throws InfeasibleStrPips unless m*w_i <= W for every i.
void require_strpips_feasible(const WeightedPopulation& pop, std::size_t m);

// Successive draws proportional to the step-start weights of the items not
// yet drawn.
Sample sample_draw_by_draw(const WeightedPopulation& pop, std::size_t m, Rng& rng);

inline constexpr std::uint64_t kDefaultMaxRounds = 1'000'000;

// Independent Bernoulli(m*w_i/W) rounds until one has exactly m successes.
Sample sample_conditional_poisson(const WeightedPopulation& pop, std::size_t m, Rng& rng,
                                  std::uint64_t max_rounds = kDefaultMaxRounds);

// Chao's stream procedure over the population in index order.
Sample sample_chao(const WeightedPopulation& pop, std::size_t m, Rng& rng);

// Throws DuplicateSelectionRisk if some entry is wider than W/m.
void require_systematic_feasible(const OrderedWeightArray& arr, std::size_t m);

// Deterministic systematic selection for start point u.
Sample systematic_at(const OrderedWeightArray& arr, std::size_t m, double u,
                     SystematicMode mode = SystematicMode::Linear);

// Same, with the start point given exactly as scaled_u = m*u (an integer).
// Used by the exact oracle, whose breakpoints are integral on this scale.
Sample systematic_at_scaled(const OrderedWeightArray& arr, std::size_t m, Weight scaled_u,
                            SystematicMode mode = SystematicMode::Linear);

Sample sample_ordered_systematic(const OrderedWeightArray& arr, std::size_t m, Rng& rng,
                                 SystematicMode mode = SystematicMode::Linear);

// Uniform shuffle of the population, then ordered systematic.
Sample sample_random_systematic(const WeightedPopulation& pop, std::size_t m, Rng& rng,
                                SystematicMode mode = SystematicMode::Linear);

}  // namespace prefattach
