#include "prefattach/sampling.hpp"

#include "prefattach/chao.hpp"
#include "prefattach/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace prefattach {

WeightedPopulation::WeightedPopulation(std::vector<Weight> weights) : weights_(std::move(weights)) {
    for (Weight w : weights_) {
        if (w < 0) {
            throw std::invalid_argument("weights must be non-negative");
        }
        total_ += w;
        if (w > 0) {
            ++positive_;
        }
    }
    if (total_ <= 0) {
        throw std::invalid_argument("total weight must be positive");
    }
}

WeightedPopulation WeightedPopulation::from_rationals(std::span<const Rational> weights) {
    BigInt common = 1;
    for (const auto& w : weights) {
        mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), w.get_den().get_mpz_t());
    }
    std::vector<Weight> scaled;
    scaled.reserve(weights.size());
    for (const auto& w : weights) {
        const Rational s = w * common;
        if (!s.get_num().fits_slong_p()) {
            throw std::invalid_argument("weights too large after scaling to integers");
        }
        scaled.push_back(s.get_num().get_si());
    }
    return WeightedPopulation(std::move(scaled));
}

Sample::Sample(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw std::invalid_argument("sample indices must be distinct");
    }
}

bool Sample::contains(std::size_t index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

OrderedWeightArray::OrderedWeightArray(std::vector<Entry> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (e.weight < 0) {
            throw std::invalid_argument("weights must be non-negative");
        }
    }
    rebuild_offsets(0);
}

OrderedWeightArray OrderedWeightArray::identity(const WeightedPopulation& pop) {
    std::vector<Entry> entries;
    entries.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        entries.push_back({i, pop.weight(i)});
    }
    return OrderedWeightArray(std::move(entries));
}

OrderedWeightArray OrderedWeightArray::arranged(const WeightedPopulation& pop,
                                                std::span<const std::size_t> order) {
    if (order.size() != pop.size()) {
        throw std::invalid_argument("order must be a permutation of the population");
    }
    std::vector<bool> seen(pop.size(), false);
    std::vector<Entry> entries;
    entries.reserve(pop.size());
    for (std::size_t i : order) {
        if (i >= pop.size() || seen[i]) {
            throw std::invalid_argument("order must be a permutation of the population");
        }
        seen[i] = true;
        entries.push_back({i, pop.weight(i)});
    }
    return OrderedWeightArray(std::move(entries));
}

std::vector<Weight> OrderedWeightArray::weights() const {
    std::vector<Weight> result;
    result.reserve(entries_.size());
    for (const auto& e : entries_) {
        result.push_back(e.weight);
    }
    return result;
}

void OrderedWeightArray::set_weight(std::size_t position, Weight weight) {
    entries_.at(position).weight = weight;
    rebuild_offsets(position);
}

void OrderedWeightArray::insert(std::size_t position, Entry entry) {
    if (position > entries_.size()) {
        throw std::out_of_range("insert position past the end");
    }
    entries_.insert(entries_.begin() + static_cast<std::ptrdiff_t>(position), entry);
    rebuild_offsets(position);
}

void OrderedWeightArray::rebuild_offsets(std::size_t from) {
    offsets_.resize(entries_.size() + 1);
    offsets_[0] = 0;
    for (std::size_t k = from; k < entries_.size(); ++k) {
        offsets_[k + 1] = offsets_[k] + entries_[k].weight;
    }
}

namespace {

void require_sample_size(std::size_t positive, std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("sample size must be at least 1");
    }
    if (m > positive) {
        throw std::invalid_argument("sample size " + std::to_string(m) + " exceeds the " +
                                    std::to_string(positive) + " positive weights");
    }
}

}  // namespace

void require_strpips_feasible(const WeightedPopulation& pop, std::size_t m) {
    const auto mm = static_cast<Weight>(m);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (mm * pop.weight(i) > pop.total()) {
            throw InfeasibleStrPips("m*w/W = " + std::to_string(mm * pop.weight(i)) + "/" +
                                   std::to_string(pop.total()) + " > 1 at index " +
                                   std::to_string(i));
        }
    }
}

std::vector<Rational> target_first_order(const WeightedPopulation& pop, std::size_t m) {
    require_strpips_feasible(pop, m);
    std::vector<Rational> pi;
    pi.reserve(pop.size());
    for (Weight w : pop.weights()) {
        Rational p(static_cast<long>(m) * w, pop.total());
        p.canonicalize();
        pi.push_back(p);
    }
    return pi;
}

Sample sample_draw_by_draw(const WeightedPopulation& pop, std::size_t m, Rng& rng) {
    require_sample_size(pop.positive_count(), m);
    std::vector<Weight> remaining(pop.weights().begin(), pop.weights().end());
    Weight left = pop.total();
    std::vector<std::size_t> chosen;
    chosen.reserve(m);
    for (std::size_t draw = 0; draw < m; ++draw) {
        auto target = static_cast<Weight>(uniform_below(rng, static_cast<std::uint64_t>(left)));
        std::size_t i = 0;
        while (target >= remaining[i]) {
            target -= remaining[i];
            ++i;
        }
        chosen.push_back(i);
        left -= remaining[i];
        remaining[i] = 0;
    }
    return Sample(std::move(chosen));
}

Sample sample_conditional_poisson(const WeightedPopulation& pop, std::size_t m, Rng& rng,
                                  std::uint64_t max_rounds) {
    require_sample_size(pop.positive_count(), m);
    require_strpips_feasible(pop, m);
    std::vector<double> p;
    p.reserve(pop.size());
    for (Weight w : pop.weights()) {
        p.push_back(static_cast<double>(static_cast<Weight>(m) * w) / static_cast<double>(pop.total()));
    }
    std::vector<std::size_t> chosen;
    for (std::uint64_t round = 0; round < max_rounds; ++round) {
        chosen.clear();
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (uniform01(rng) < p[i]) {
                chosen.push_back(i);
            }
        }
        if (chosen.size() == m) {
            return Sample(std::move(chosen));
        }
    }
    throw RejectionBudgetExhausted(max_rounds);
}

Sample sample_chao(const WeightedPopulation& pop, std::size_t m, Rng& rng) {
    require_sample_size(pop.positive_count(), m);
    require_strpips_feasible(pop, m);
    std::vector<std::size_t> chosen;
    detail::chao_sample(pop.weights(), m, rng, chosen);
    return Sample(std::move(chosen));
}

void require_systematic_feasible(const OrderedWeightArray& arr, std::size_t m) {
    std::size_t positive = 0;
    for (const auto& e : arr.entries()) {
        positive += e.weight > 0 ? 1 : 0;
    }
    require_sample_size(positive, m);
    const auto mm = static_cast<Weight>(m);
    for (const auto& e : arr.entries()) {
        if (mm * e.weight > arr.total()) {
            throw DuplicateSelectionRisk("entry for index " + std::to_string(e.index) +
                                         " is wider than the skip W/m");
        }
    }
}

namespace {

// Walks the array once; `point(k)` is the k-th selection point on the
// m-scaled axis, non-decreasing in k after the circular rotation is undone.
template <class Point>
Sample select_points(const OrderedWeightArray& arr, std::size_t m, Point point) {
    std::vector<std::size_t> chosen;
    chosen.reserve(m);
    const auto mm = static_cast<Weight>(m);
    std::size_t position = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const auto x = point(k);
        while (position + 1 < arr.size() && mm * arr.offset(position + 1) <= x) {
            ++position;
        }
        chosen.push_back(arr.entry(position).index);
    }
    return Sample(std::move(chosen));
}

}  // namespace

Sample systematic_at_scaled(const OrderedWeightArray& arr, std::size_t m, Weight scaled_u,
                            SystematicMode mode) {
    require_systematic_feasible(arr, m);
    const Weight total = arr.total();
    const auto mm = static_cast<Weight>(m);
    if (mode == SystematicMode::Linear) {
        if (scaled_u < 0 || scaled_u >= total) {
            throw std::invalid_argument("start point outside [0, W/m)");
        }
        return select_points(arr, m, [&](std::size_t k) { return scaled_u + static_cast<Weight>(k) * total; });
    }
    if (scaled_u < 0 || scaled_u >= mm * total) {
        throw std::invalid_argument("start point outside [0, W)");
    }
    // Rotate so the points are visited in increasing order.
    const Weight first = scaled_u % total;
    return select_points(arr, m, [&](std::size_t k) { return first + static_cast<Weight>(k) * total; });
}

Sample systematic_at(const OrderedWeightArray& arr, std::size_t m, double u, SystematicMode mode) {
    require_systematic_feasible(arr, m);
    const auto total = static_cast<double>(arr.total());
    const auto md = static_cast<double>(m);
    const double limit = mode == SystematicMode::Linear ? total / md : total;
    if (!(u >= 0.0 && u < limit)) {
        throw std::invalid_argument("start point out of range");
    }
    const double first = mode == SystematicMode::Linear ? md * u : std::fmod(md * u, total);
    std::vector<std::size_t> chosen;
    chosen.reserve(m);
    std::size_t position = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = first + static_cast<double>(k) * total;
        while (position + 1 < arr.size() && md * static_cast<double>(arr.offset(position + 1)) <= x) {
            ++position;
        }
        chosen.push_back(arr.entry(position).index);
    }
    return Sample(std::move(chosen));
}

Sample sample_ordered_systematic(const OrderedWeightArray& arr, std::size_t m, Rng& rng,
                                 SystematicMode mode) {
    require_systematic_feasible(arr, m);
    const auto total = static_cast<double>(arr.total());
    const double limit = mode == SystematicMode::Linear ? total / static_cast<double>(m) : total;
    return systematic_at(arr, m, uniform01(rng) * limit, mode);
}

Sample sample_random_systematic(const WeightedPopulation& pop, std::size_t m, Rng& rng,
                                SystematicMode mode) {
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[uniform_below(rng, i)]);
    }
    return sample_ordered_systematic(OrderedWeightArray::arranged(pop, order), m, rng, mode);
}

}  // namespace prefattach
