#include "prefattach/chao.hpp"
#include "prefattach/errors.hpp"
#include "prefattach/generator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace prefattach {

namespace {

bool is_target(std::span<const VertexId> targets, std::size_t index) {
    return std::find(targets.begin(), targets.end(), static_cast<VertexId>(index)) != targets.end();
}

}  // namespace

OrderedWeightArray ordered_array_update(OrderPolicy policy, const OrderedWeightArray& arr,
                                        VertexId newborn, std::span<const VertexId> targets) {
    std::vector<OrderedWeightArray::Entry> entries(arr.entries().begin(), arr.entries().end());
    std::size_t hit = 0;
    for (auto& e : entries) {
        if (is_target(targets, e.index)) {
            ++e.weight;
            ++hit;
        }
    }
    if (hit != targets.size()) {
        throw std::invalid_argument("every target must be in the array");
    }
    const OrderedWeightArray::Entry born{newborn, static_cast<Weight>(targets.size())};
    switch (policy) {
        case OrderPolicy::DegreeDescending:
            entries.push_back(born);
            std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
                return a.weight != b.weight ? a.weight > b.weight : a.index < b.index;
            });
            break;
        case OrderPolicy::AgeOrder:
            entries.push_back(born);
            break;
        case OrderPolicy::RomanticCycle: {
            std::size_t position = 0;
            switch (newborn % 4) {
                case 0:
                    position = 0;
                    break;
                case 1:
                    position = entries.size();
                    break;
                default: {
                    Weight total = 0;
                    for (const auto& e : entries) {
                        total += e.weight;
                    }
                    Weight left = 0;
                    Weight best = total;  // |0 - total| at position 0
                    for (std::size_t p = 1; p <= entries.size(); ++p) {
                        left += entries[p - 1].weight;
                        const Weight diff = std::abs(2 * left - total);
                        if (diff < best) {
                            best = diff;
                            position = p;
                        }
                    }
                }
            }
            entries.insert(entries.begin() + static_cast<std::ptrdiff_t>(position), born);
            break;
        }
    }
    return OrderedWeightArray(std::move(entries));
}

OrderedWeightArray initial_array(OrderPolicy policy, std::span<const std::uint32_t> degrees) {
    std::vector<OrderedWeightArray::Entry> entries;
    entries.reserve(degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        entries.push_back({i, static_cast<Weight>(degrees[i])});
    }
    if (policy == OrderPolicy::DegreeDescending) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) { return a.weight > b.weight; });
    }
    return OrderedWeightArray(std::move(entries));
}

struct AttachmentSampler::State {
    DesignSpec design;
    std::size_t m = 0;
    std::uint64_t total = 0;
    std::uint32_t max_degree = 0;

    // Draw-by-draw: every edge endpoint once, so a uniform entry is a
    // degree-proportional vertex. Redrawing already chosen vertices gives
    // the draw-by-draw conditionals exactly.
    std::vector<VertexId> bag;

    // Conditional Poisson: vertices bucketed by degree. Under rejection,
    // CP is m independent draws with replacement proportional to
    // p/(1-p) = m*d/(W - m*d), accepted when all are distinct.
    std::vector<std::vector<VertexId>> buckets;
    std::vector<std::uint32_t> slot;
    std::vector<std::uint32_t> classes;
    std::vector<double> class_mass;

    // Ordered systematic.
    OrderedWeightArray arr;

    std::vector<std::size_t> chosen;
    std::vector<Weight> weights;

    void bucket_insert(VertexId v, std::uint32_t d) {
        if (buckets.size() <= d) {
            buckets.resize(d + 1);
        }
        if (slot.size() <= v) {
            slot.resize(v + 1);
        }
        slot[v] = static_cast<std::uint32_t>(buckets[d].size());
        buckets[d].push_back(v);
    }

    void bucket_erase(VertexId v, std::uint32_t d) {
        auto& b = buckets[d];
        const std::uint32_t s = slot[v];
        b[s] = b.back();
        slot[b[s]] = s;
        b.pop_back();
    }

    void draw_dbd(Rng& rng, std::vector<VertexId>& out) {
        while (out.size() < m) {
            const VertexId v = bag[uniform_below(rng, bag.size())];
            if (std::find(out.begin(), out.end(), v) == out.end()) {
                out.push_back(v);
            }
        }
    }

    void draw_cp(Rng& rng, std::vector<VertexId>& out) {
        const auto mm = static_cast<std::uint64_t>(m);
        classes.clear();
        class_mass.clear();
        double mass = 0.0;
        for (std::uint32_t d = 1; d < buckets.size(); ++d) {
            if (buckets[d].empty()) {
                continue;
            }
            const std::uint64_t scaled = mm * d;
            if (scaled == total) {
                // p = 1: always in.
                out.insert(out.end(), buckets[d].begin(), buckets[d].end());
                continue;
            }
            classes.push_back(d);
            const double y = static_cast<double>(scaled) / static_cast<double>(total - scaled);
            mass += y * static_cast<double>(buckets[d].size());
            class_mass.push_back(mass);
        }
        if (out.size() > m) {
            throw DegenerateDesign("more than m vertices are certain");
        }
        const std::size_t forced = out.size();
        if (forced == m) {
            return;
        }
        if (classes.empty()) {
            throw DegenerateDesign("too few vertices with positive degree");
        }
        for (std::uint64_t round = 0; round < kDefaultMaxRounds; ++round) {
            out.resize(forced);
            bool distinct = true;
            while (out.size() < m && distinct) {
                const double x = uniform01(rng) * mass;
                std::size_t c = static_cast<std::size_t>(
                    std::upper_bound(class_mass.begin(), class_mass.end(), x) - class_mass.begin());
                c = std::min(c, classes.size() - 1);
                const auto& b = buckets[classes[c]];
                const VertexId v = b[uniform_below(rng, b.size())];
                distinct = std::find(out.begin() + static_cast<std::ptrdiff_t>(forced), out.end(), v) == out.end();
                out.push_back(v);
            }
            if (distinct) {
                return;
            }
        }
        throw RejectionBudgetExhausted(kDefaultMaxRounds);
    }
};

AttachmentSampler::AttachmentSampler(const DesignSpec& design, std::size_t m)
    : state_(std::make_unique<State>()) {
    design.validate(m);
    state_->design = design;
    state_->m = m;
}

AttachmentSampler::~AttachmentSampler() = default;
AttachmentSampler::AttachmentSampler(AttachmentSampler&&) noexcept = default;
AttachmentSampler& AttachmentSampler::operator=(AttachmentSampler&&) noexcept = default;

const DesignSpec& AttachmentSampler::design() const noexcept { return state_->design; }

const OrderedWeightArray* AttachmentSampler::array() const noexcept {
    return state_->design.kind == DesignKind::OrderedSystematic ? &state_->arr : nullptr;
}

void AttachmentSampler::reset(std::span<const std::uint32_t> degrees) {
    State& s = *state_;
    s.total = 0;
    s.max_degree = 0;
    for (std::uint32_t d : degrees) {
        s.total += d;
        s.max_degree = std::max(s.max_degree, d);
    }
    s.bag.clear();
    s.buckets.clear();
    s.slot.clear();
    switch (s.design.kind) {
        case DesignKind::DrawByDraw:
            for (std::size_t v = 0; v < degrees.size(); ++v) {
                s.bag.insert(s.bag.end(), degrees[v], static_cast<VertexId>(v));
            }
            break;
        case DesignKind::ConditionalPoisson:
            for (std::size_t v = 0; v < degrees.size(); ++v) {
                s.bucket_insert(static_cast<VertexId>(v), degrees[v]);
            }
            break;
        case DesignKind::OrderedSystematic:
            s.arr = initial_array(*s.design.order, degrees);
            break;
        default:
            break;
    }
}

void AttachmentSampler::draw(std::span<const std::uint32_t> degrees, Rng& rng,
                             std::vector<VertexId>& out) {
    State& s = *state_;
    out.clear();
    if (degrees.size() < s.m) {
        throw std::invalid_argument("fewer vertices than m");
    }
    if (degrees.size() == s.m) {
        // The only sample; covers K1 whose single degree is 0.
        for (std::size_t v = 0; v < s.m; ++v) {
            out.push_back(static_cast<VertexId>(v));
        }
        return;
    }
    if (static_cast<std::uint64_t>(s.m) * s.max_degree > s.total) {
        throw InfeasibleStrPips("m times the maximum degree exceeds the degree total");
    }
    switch (s.design.kind) {
        case DesignKind::StrPipsChao:
            detail::chao_sample(degrees, s.m, rng, s.chosen);
            break;
        case DesignKind::DrawByDraw:
            s.draw_dbd(rng, out);
            std::sort(out.begin(), out.end());
            return;
        case DesignKind::ConditionalPoisson:
            s.draw_cp(rng, out);
            std::sort(out.begin(), out.end());
            return;
        case DesignKind::OrderedSystematic: {
            const Sample picked = sample_ordered_systematic(s.arr, s.m, rng, s.design.systematic_mode());
            s.chosen.assign(picked.begin(), picked.end());
            break;
        }
        case DesignKind::RandomSystematic: {
            s.weights.assign(degrees.begin(), degrees.end());
            const Sample picked = sample_random_systematic(WeightedPopulation(s.weights), s.m, rng,
                                                           s.design.systematic_mode());
            s.chosen.assign(picked.begin(), picked.end());
            break;
        }
    }
    for (std::size_t i : s.chosen) {
        out.push_back(static_cast<VertexId>(i));
    }
}

void AttachmentSampler::commit(std::span<const std::uint32_t> degrees, std::span<const VertexId> targets) {
    State& s = *state_;
    const auto newborn = static_cast<VertexId>(degrees.size() - 1);
    const std::uint32_t born_degree = degrees.back();
    s.total += 2 * targets.size();
    s.max_degree = std::max(s.max_degree, born_degree);
    for (VertexId v : targets) {
        s.max_degree = std::max(s.max_degree, degrees[v]);
    }
    switch (s.design.kind) {
        case DesignKind::DrawByDraw:
            s.bag.insert(s.bag.end(), targets.begin(), targets.end());
            s.bag.insert(s.bag.end(), born_degree, newborn);
            break;
        case DesignKind::ConditionalPoisson:
            for (VertexId v : targets) {
                s.bucket_erase(v, degrees[v] - 1);
                s.bucket_insert(v, degrees[v]);
            }
            s.bucket_insert(newborn, born_degree);
            break;
        case DesignKind::OrderedSystematic:
            s.arr = ordered_array_update(*s.design.order, s.arr, newborn, targets);
            break;
        default:
            break;
    }
}

}  // namespace prefattach
