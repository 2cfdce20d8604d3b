#include "prefattach/generator.hpp"
#include "prefattach/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace prefattach {

namespace {

// pi over positions a and b of a linear systematic draw with m = 2. On the
// doubled axis entry k covers [2*off_k, 2*off_{k+1}) and the points are
// u and u + W for u in [0, W).
Rational ordered_pair(const OrderedWeightArray& arr, std::size_t a, std::size_t b) {
    const Weight total = arr.total();
    auto hits = [&](std::size_t pos, Weight shift) {
        const Weight lo = std::max<Weight>(2 * arr.offset(pos) - shift, 0);
        const Weight hi = std::min<Weight>(2 * arr.offset(pos + 1) - shift, total);
        return std::pair{lo, hi};
    };
    Weight length = 0;
    for (Weight sa : {Weight{0}, total}) {
        for (Weight sb : {Weight{0}, total}) {
            const auto [alo, ahi] = hits(a, sa);
            const auto [blo, bhi] = hits(b, sb);
            length += std::max<Weight>(0, std::min(ahi, bhi) - std::max(alo, blo));
        }
    }
    Rational p(length, total);
    p.canonicalize();
    return p;
}

}  // namespace

Rational wheel_joint_probability(std::size_t t, WheelDesign design, WheelCenter center) {
    const Graph g = wheel_minus_arc(t, center);
    const std::size_t hub = center == WheelCenter::FirstBorn ? 0 : 1;
    const std::size_t last = t - 1;
    std::vector<Weight> weights(g.degrees().begin(), g.degrees().end());
    const WeightedPopulation pop(weights);
    if (design == WheelDesign::RandomSystematic) {
        return random_systematic_joint(pop, 2, hub, last);
    }
    const auto arr = arrange_population(pop, OrderPolicy::AgeOrder);
    require_systematic_feasible(arr, 2);
    return ordered_pair(arr, hub, last);
}

std::vector<WheelRow> wheel_table(std::size_t t_max, WheelCenter center) {
    if (t_max < 4) {
        throw std::invalid_argument("t_max must be at least 4");
    }
    std::vector<WheelRow> rows;
    for (std::size_t t = 4; t <= t_max; ++t) {
        rows.push_back({t, wheel_joint_probability(t, WheelDesign::OrderedAge, center),
                        wheel_joint_probability(t, WheelDesign::RandomSystematic, center)});
    }
    return rows;
}

std::optional<std::size_t> wheel_first_zero(std::span<const WheelRow> rows) {
    std::optional<std::size_t> first;
    for (auto it = rows.rbegin(); it != rows.rend() && it->ordered == 0; ++it) {
        first = it->t;
    }
    return first;
}

}  // namespace prefattach
