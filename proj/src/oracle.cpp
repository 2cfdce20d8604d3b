#include "prefattach/oracle.hpp"

#include "prefattach/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace prefattach {

namespace {

// Joint tables stop at this order; deeper tuples are implied by the sample
// distribution, which is always kept in full.
constexpr std::size_t kMaxJointOrder = 4;

Rational ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
    if (k > n) {
        return;
    }
    std::vector<std::size_t> combo(k);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    while (true) {
        visit(combo);
        std::size_t pos = k;
        while (pos > 0 && combo[pos - 1] == n - k + pos - 1) {
            --pos;
        }
        if (pos == 0) {
            return;
        }
        ++combo[pos - 1];
        for (std::size_t q = pos; q < k; ++q) {
            combo[q] = combo[q - 1] + 1;
        }
    }
}

std::vector<Weight> weights_by_index(const OrderedWeightArray& arr) {
    std::vector<Weight> weights(arr.size(), 0);
    for (const auto& e : arr.entries()) {
        if (e.index >= arr.size()) {
            throw std::invalid_argument("array indices must be a permutation of 0..size-1");
        }
        weights[e.index] = e.weight;
    }
    return weights;
}

// Sample distribution of systematic selection as exact interval lengths on
// the m-scaled start axis. Returns the axis length.
Weight systematic_lengths(const OrderedWeightArray& arr, std::size_t m, SystematicMode mode,
                          std::map<Sample, Weight>& lengths) {
    const Weight total = arr.total();
    const auto mm = static_cast<Weight>(m);
    const Weight domain = mode == SystematicMode::Linear ? total : mm * total;
    std::vector<Weight> breaks{0, domain};
    for (std::size_t position = 0; position <= arr.size(); ++position) {
        const Weight edge = mm * (position < arr.size() ? arr.offset(position) : total);
        for (std::size_t k = 0; k < m; ++k) {
            Weight u = edge - static_cast<Weight>(k) * total;
            if (mode == SystematicMode::Circular) {
                u = ((u % domain) + domain) % domain;
            }
            if (u >= 0 && u < domain) {
                breaks.push_back(u);
            }
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    for (std::size_t r = 0; r + 1 < breaks.size(); ++r) {
        // The selection is constant on [breaks[r], breaks[r+1]).
        lengths[systematic_at_scaled(arr, m, breaks[r], mode)] += breaks[r + 1] - breaks[r];
    }
    return domain;
}

}  // namespace

Rational InclusionTable::probability(std::span<const std::size_t> tuple) const {
    IndexTuple key(tuple.begin(), tuple.end());
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end()) {
        throw std::invalid_argument("tuple indices must be distinct");
    }
    if (key.empty()) {
        return Rational(1);
    }
    if (key.size() == 1) {
        return first_order.at(key.front());
    }
    if (key.size() > m) {
        return Rational(0);
    }
    if (key.size() <= kMaxJointOrder) {
        auto it = joint.find(key);
        return it == joint.end() ? Rational(0) : it->second;
    }
    Rational sum = 0;
    for (const auto& [sample, p] : samples) {
        if (std::includes(sample.begin(), sample.end(), key.begin(), key.end())) {
            sum += p;
        }
    }
    return sum;
}

Rational InclusionTable::pair(std::size_t i, std::size_t j) const {
    const std::size_t tuple[2] = {i, j};
    return probability(tuple);
}

InclusionTable table_from_distribution(std::vector<Weight> weights, std::size_t m,
                                       std::map<Sample, Rational> distribution, bool exact) {
    InclusionTable table;
    table.m = m;
    table.exact = exact;
    table.first_order.assign(weights.size(), Rational(0));
    const std::size_t max_order = std::min(m, kMaxJointOrder);
    if (max_order >= 2) {
        for_each_combination(weights.size(), 2, [&](const std::vector<std::size_t>& c) {
            table.joint.emplace(c, Rational(0));
        });
    }
    for (const auto& [sample, p] : distribution) {
        if (sample.size() != m) {
            throw std::invalid_argument("sample size differs from m");
        }
        for (std::size_t i : sample) {
            table.first_order.at(i) += p;
        }
        const auto idx = sample.indices();
        for (std::size_t order = 2; order <= max_order; ++order) {
            for_each_combination(idx.size(), order, [&](const std::vector<std::size_t>& c) {
                IndexTuple key;
                key.reserve(order);
                for (std::size_t pos : c) {
                    key.push_back(idx[pos]);
                }
                table.joint[key] += p;
            });
        }
    }
    table.weights = std::move(weights);
    table.samples = std::move(distribution);
    return table;
}

InclusionTable exact_dbd(const WeightedPopulation& pop, std::size_t m) {
    if (pop.size() > kMaxDrawByDrawPopulation || m > kMaxDrawByDrawSample) {
        throw EnumerationTooLarge("draw-by-draw enumeration is limited to populations of " +
                                  std::to_string(kMaxDrawByDrawPopulation) + " and samples of " +
                                  std::to_string(kMaxDrawByDrawSample));
    }
    if (m == 0 || m > pop.positive_count()) {
        throw std::invalid_argument("sample size must be between 1 and the number of positive weights");
    }
    std::map<Sample, Rational> distribution;
    std::vector<std::size_t> drawn;
    std::vector<bool> used(pop.size(), false);
    auto recurse = [&](auto&& self, const Rational& prob, Weight left) -> void {
        if (drawn.size() == m) {
            distribution[Sample(drawn)] += prob;
            return;
        }
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (used[i] || pop.weight(i) == 0) {
                continue;
            }
            used[i] = true;
            drawn.push_back(i);
            self(self, prob * ratio(pop.weight(i), left), left - pop.weight(i));
            drawn.pop_back();
            used[i] = false;
        }
    };
    recurse(recurse, Rational(1), pop.total());
    return table_from_distribution({pop.weights().begin(), pop.weights().end()}, m,
                                   std::move(distribution), true);
}

InclusionTable exact_cp(const WeightedPopulation& pop, std::size_t m) {
    if (pop.size() > kMaxConditionalPoissonPopulation) {
        throw EnumerationTooLarge("conditional Poisson enumeration is limited to populations of " +
                                  std::to_string(kMaxConditionalPoissonPopulation));
    }
    if (m == 0 || m > pop.size()) {
        throw std::invalid_argument("sample size must be between 1 and the population size");
    }
    require_strpips_feasible(pop, m);
    // With p_i = m*w_i/W, P(S) is proportional to
    // prod_{i in S} m*w_i * prod_{i not in S} (W - m*w_i).
    const auto mm = static_cast<long>(m);
    std::vector<BigInt> in(pop.size());
    std::vector<BigInt> out(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        in[i] = mm * pop.weight(i);
        out[i] = pop.total() - mm * pop.weight(i);
    }
    std::map<Sample, BigInt> mass;
    BigInt norm = 0;
    std::vector<bool> member(pop.size());
    for_each_combination(pop.size(), m, [&](const std::vector<std::size_t>& c) {
        std::fill(member.begin(), member.end(), false);
        for (std::size_t i : c) {
            member[i] = true;
        }
        BigInt product = 1;
        for (std::size_t i = 0; i < pop.size() && product != 0; ++i) {
            product *= member[i] ? in[i] : out[i];
        }
        if (product != 0) {
            norm += product;
            mass.emplace(Sample(c), std::move(product));
        }
    });
    if (norm == 0) {
        throw DegenerateDesign("every sample of size " + std::to_string(m) + " has probability zero");
    }
    std::map<Sample, Rational> distribution;
    for (auto& [sample, w] : mass) {
        Rational p(w, norm);
        p.canonicalize();
        distribution.emplace(sample, std::move(p));
    }
    return table_from_distribution({pop.weights().begin(), pop.weights().end()}, m,
                                   std::move(distribution), true);
}

InclusionTable exact_systematic(const OrderedWeightArray& arr, std::size_t m, SystematicMode mode) {
    require_systematic_feasible(arr, m);
    std::map<Sample, Weight> lengths;
    const Weight domain = systematic_lengths(arr, m, mode, lengths);
    std::map<Sample, Rational> distribution;
    for (const auto& [sample, length] : lengths) {
        distribution.emplace(sample, ratio(length, domain));
    }
    return table_from_distribution(weights_by_index(arr), m, std::move(distribution), true);
}

InclusionTable exact_random_systematic(const WeightedPopulation& pop, std::size_t m,
                                       SystematicMode mode) {
    if (pop.size() > kMaxRandomSystematicPopulation) {
        throw EnumerationTooLarge("random systematic enumeration is limited to populations of " +
                                  std::to_string(kMaxRandomSystematicPopulation));
    }
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    require_systematic_feasible(OrderedWeightArray::arranged(pop, order), m);
    std::map<Sample, Weight> lengths;
    Weight domain = 0;
    long permutations = 0;
    do {
        domain = systematic_lengths(OrderedWeightArray::arranged(pop, order), m, mode, lengths);
        ++permutations;
    } while (std::next_permutation(order.begin(), order.end()));
    std::map<Sample, Rational> distribution;
    const BigInt denominator = BigInt(domain) * permutations;
    for (const auto& [sample, length] : lengths) {
        Rational p(BigInt(length), denominator);
        p.canonicalize();
        distribution.emplace(sample, std::move(p));
    }
    return table_from_distribution({pop.weights().begin(), pop.weights().end()}, m,
                                   std::move(distribution), true);
}

namespace {

struct Interval {
    Weight lo;
    Weight hi;
};

// Start points (m-scaled, in [0, W)) for which some selection point lands
// in [lo, hi).
std::vector<Interval> hitting_starts(Weight lo, Weight hi, Weight total, std::size_t m) {
    std::vector<Interval> result;
    for (std::size_t k = 0; k < m; ++k) {
        const Weight shift = static_cast<Weight>(k) * total;
        const Weight a = std::max<Weight>(lo - shift, 0);
        const Weight b = std::min<Weight>(hi - shift, total);
        if (a < b) {
            result.push_back({a, b});
        }
    }
    return result;
}

Weight overlap(const std::vector<Interval>& x, const std::vector<Interval>& y) {
    Weight sum = 0;
    for (const auto& a : x) {
        for (const auto& b : y) {
            sum += std::max<Weight>(0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
        }
    }
    return sum;
}

BigInt rising(BigInt base, std::size_t count) {
    BigInt value = 1;
    for (std::size_t q = 0; q < count; ++q) {
        value *= base + static_cast<unsigned long>(q);
    }
    return value;
}

BigInt multinomial3(std::size_t total, std::size_t a, std::size_t b) {
    BigInt first;
    BigInt second;
    mpz_bin_uiui(first.get_mpz_t(), total, a);
    mpz_bin_uiui(second.get_mpz_t(), total - a, b);
    return first * second;
}

}  // namespace

Rational random_systematic_joint(const WeightedPopulation& pop, std::size_t m, std::size_t i,
                                 std::size_t j) {
    if (i == j || i >= pop.size() || j >= pop.size()) {
        throw std::invalid_argument("random_systematic_joint needs two distinct valid indices");
    }
    {
        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        require_systematic_feasible(OrderedWeightArray::arranged(pop, order), m);
    }
    // Group the other items by weight; the most populous class is summed in
    // closed form, the others are enumerated.
    std::map<Weight, std::size_t> class_count;
    for (std::size_t q = 0; q < pop.size(); ++q) {
        if (q != i && q != j) {
            ++class_count[pop.weight(q)];
        }
    }
    std::vector<std::pair<Weight, std::size_t>> classes(class_count.begin(), class_count.end());
    std::size_t big = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c].second > classes[big].second) {
            big = c;
        }
    }
    const Weight total = pop.total();
    const auto mm = static_cast<Weight>(m);
    const std::size_t others = pop.size() - 2;
    const Weight big_weight = classes.empty() ? 0 : classes[big].first;
    const std::size_t big_count = classes.empty() ? 0 : classes[big].second;

    // With `first` before `second`, a permutation is summarized by how many
    // items of each class sit before, between and after the pair. The
    // number of permutations with a given split is
    //   prod_c multinomial(count_c; x_c) * n_before! * n_between! * n_after!,
    // and the big class's factorials cancel against the slot factorials up
    // to rising products, leaving a common factor big_count! that is divided
    // out of numerator and denominator alike.
    BigInt numerator = 0;
    auto accumulate = [&](Weight first_weight, Weight second_weight) {
        std::vector<std::size_t> before(classes.size(), 0);
        std::vector<std::size_t> between(classes.size(), 0);
        auto recurse = [&](auto&& self, std::size_t c, const BigInt& coefficient, Weight small_before,
                           Weight small_between, std::size_t small_n1, std::size_t small_n2,
                           std::size_t small_n3) -> void {
            if (c == classes.size()) {
                for (std::size_t y1 = 0; y1 <= big_count; ++y1) {
                    for (std::size_t y2 = 0; y1 + y2 <= big_count; ++y2) {
                        const std::size_t y3 = big_count - y1 - y2;
                        const Weight a = small_before + big_weight * static_cast<Weight>(y1);
                        const Weight d = small_between + big_weight * static_cast<Weight>(y2);
                        const Weight first_lo = mm * a;
                        const Weight second_lo = mm * (a + first_weight + d);
                        const Weight hits = overlap(
                            hitting_starts(first_lo, first_lo + mm * first_weight, total, m),
                            hitting_starts(second_lo, second_lo + mm * second_weight, total, m));
                        if (hits == 0) {
                            continue;
                        }
                        numerator += coefficient * rising(BigInt(static_cast<unsigned long>(y1 + 1)), small_n1) *
                                     rising(BigInt(static_cast<unsigned long>(y2 + 1)), small_n2) *
                                     rising(BigInt(static_cast<unsigned long>(y3 + 1)), small_n3) * hits;
                    }
                }
                return;
            }
            if (c == big) {
                self(self, c + 1, coefficient, small_before, small_between, small_n1, small_n2, small_n3);
                return;
            }
            const auto [w, count] = classes[c];
            for (std::size_t x1 = 0; x1 <= count; ++x1) {
                for (std::size_t x2 = 0; x1 + x2 <= count; ++x2) {
                    const std::size_t x3 = count - x1 - x2;
                    self(self, c + 1, coefficient * multinomial3(count, x1, x2),
                         small_before + w * static_cast<Weight>(x1), small_between + w * static_cast<Weight>(x2),
                         small_n1 + x1, small_n2 + x2, small_n3 + x3);
                }
            }
        };
        recurse(recurse, 0, BigInt(1), 0, 0, 0, 0, 0);
    };
    accumulate(pop.weight(i), pop.weight(j));
    accumulate(pop.weight(j), pop.weight(i));

    // (others + 2)! / big_count! permutations per unit, times the start axis.
    BigInt denominator = rising(BigInt(static_cast<unsigned long>(big_count + 1)), others + 2 - big_count);
    denominator *= total;
    Rational result(numerator, denominator);
    result.canonicalize();
    return result;
}

OrderedWeightArray arrange_population(const WeightedPopulation& pop, OrderPolicy order) {
    std::vector<std::size_t> positions(pop.size());
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    switch (order) {
        case OrderPolicy::AgeOrder:
            break;
        case OrderPolicy::DegreeDescending:
            std::stable_sort(positions.begin(), positions.end(), [&](std::size_t a, std::size_t b) {
                return pop.weight(a) > pop.weight(b);
            });
            break;
        case OrderPolicy::RomanticCycle:
            throw std::invalid_argument("the romantic order needs a growing graph");
    }
    return OrderedWeightArray::arranged(pop, positions);
}

Sample draw_sample(const DesignSpec& design, const WeightedPopulation& pop, std::size_t m, Rng& rng) {
    switch (design.kind) {
        case DesignKind::StrPipsChao:
            return sample_chao(pop, m, rng);
        case DesignKind::DrawByDraw:
            return sample_draw_by_draw(pop, m, rng);
        case DesignKind::ConditionalPoisson:
            return sample_conditional_poisson(pop, m, rng);
        case DesignKind::OrderedSystematic:
            return sample_ordered_systematic(
                arrange_population(pop, design.order.value_or(OrderPolicy::AgeOrder)), m, rng,
                design.systematic_mode());
        case DesignKind::RandomSystematic:
            return sample_random_systematic(pop, m, rng, design.systematic_mode());
    }
    throw std::logic_error("unhandled design kind");
}

InclusionTable monte_carlo_inclusion(const DesignSpec& design, const WeightedPopulation& pop,
                                     std::size_t m, std::uint64_t reps, Rng& rng) {
    if (reps == 0) {
        throw std::invalid_argument("reps must be at least 1");
    }
    design.validate(m);
    std::map<Sample, std::uint64_t> counts;
    if (design.kind == DesignKind::OrderedSystematic) {
        // Arrange once instead of per draw.
        const auto arr = arrange_population(pop, design.order.value_or(OrderPolicy::AgeOrder));
        for (std::uint64_t r = 0; r < reps; ++r) {
            ++counts[sample_ordered_systematic(arr, m, rng, design.systematic_mode())];
        }
    } else {
        for (std::uint64_t r = 0; r < reps; ++r) {
            ++counts[draw_sample(design, pop, m, rng)];
        }
    }
    std::map<Sample, Rational> distribution;
    for (const auto& [sample, count] : counts) {
        Rational p(BigInt(static_cast<unsigned long>(count)), BigInt(static_cast<unsigned long>(reps)));
        p.canonicalize();
        distribution.emplace(sample, std::move(p));
    }
    return table_from_distribution({pop.weights().begin(), pop.weights().end()}, m,
                                   std::move(distribution), false);
}

Table1Row table1_closed_forms(std::size_t n) {
    if (n < 3) {
        throw std::invalid_argument("the heavy-node example needs n >= 3");
    }
    const auto nn = static_cast<long>(n);
    Table1Row row;
    row.n = n;
    row.strpips = ratio(4, nn + 1);
    row.draw_by_draw = ratio(2, nn + 1) + ratio(nn - 1, nn + 1) * ratio(2, nn);
    row.conditional_poisson = ratio(4 * nn - 4, nn * nn - nn + 2);
    row.draw_by_draw_difference = ratio(2, nn * nn + nn);
    row.conditional_poisson_difference = ratio(4 * nn - 12, nn * nn * nn + nn + 2);
    row.draw_by_draw_ratio = ratio(2 * nn, 2 * nn - 1);
    row.conditional_poisson_ratio = ratio(nn * nn - nn + 2, nn * nn - 1);
    return row;
}

MarginalizationCheck check_marginalization(const InclusionTable& table) {
    MarginalizationCheck check;
    auto absolute = [](const Rational& x) { return x < 0 ? Rational(-x) : x; };
    Rational sum = 0;
    for (const auto& p : table.first_order) {
        sum += p;
    }
    check.max_residual = absolute(sum - static_cast<long>(table.m));

    const std::size_t max_order = std::min(table.m, kMaxJointOrder);
    for (std::size_t order = 2; order <= max_order; ++order) {
        // Sum each order-k entry into its (k-1)-subtuples.
        std::map<IndexTuple, Rational> sums;
        for (const auto& [tuple, p] : table.joint) {
            if (tuple.size() != order) {
                continue;
            }
            for (std::size_t drop = 0; drop < order; ++drop) {
                IndexTuple sub;
                sub.reserve(order - 1);
                for (std::size_t q = 0; q < order; ++q) {
                    if (q != drop) {
                        sub.push_back(tuple[q]);
                    }
                }
                sums[sub] += p;
            }
        }
        const long factor = static_cast<long>(table.m - order + 1);
        auto compare = [&](const IndexTuple& sub, const Rational& p) {
            auto it = sums.find(sub);
            const Rational got = it == sums.end() ? Rational(0) : it->second;
            const Rational residual = absolute(got - factor * p);
            if (residual > check.max_residual) {
                check.max_residual = residual;
            }
        };
        if (order == 2) {
            for (std::size_t i = 0; i < table.first_order.size(); ++i) {
                compare({i}, table.first_order[i]);
            }
        } else {
            for (const auto& [tuple, p] : table.joint) {
                if (tuple.size() == order - 1) {
                    compare(tuple, p);
                }
            }
        }
        // Entries of order k whose (k-1)-subtuples are absent from the table.
        for (const auto& [sub, s] : sums) {
            if (sub.size() >= 2 && !table.joint.contains(sub) && s != 0) {
                check.max_residual = std::max(check.max_residual, absolute(s));
            }
        }
    }
    check.ok = check.max_residual == 0;
    return check;
}

nlohmann::json to_json(const InclusionTable& table) {
    nlohmann::json out;
    out["m"] = table.m;
    out["weights"] = table.weights;
    auto& first = out["first_order"] = nlohmann::json::array();
    for (const auto& p : table.first_order) {
        first.push_back(to_fraction_string(p));
    }
    auto& joint = out["joint"] = nlohmann::json::array();
    // std::map orders tuples lexicographically already.
    for (const auto& [tuple, p] : table.joint) {
        joint.push_back({{"tuple", tuple}, {"p", to_fraction_string(p)}});
    }
    out["exact"] = table.exact;
    return out;
}

}  // namespace prefattach
