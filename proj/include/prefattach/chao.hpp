#pragma once

// Chao's (1982) unequal probability reservoir procedure.
//
// Items are visited in index order. After item k has been visited, item i
// (i <= k) is in the reservoir with probability pi_i(k), the strict pips
// probability of the prefix 1..k with overweight items capped at 1:
// the h heaviest items are certain and the rest get c*w_i, with h and c
// chosen so the probabilities sum to m.
//
// Visiting item k: accept it with probability pi_k(k). On acceptance an
// item i of the reservoir is evicted with probability
//     (1 - pi_i(k) / pi_i(k-1)) / pi_k(k),
// which sums to one over every possible reservoir because the ratio is the
// same for all items that were not certain at step k-1. Without capping at
// k-1 and k the eviction is uniform, which is the hot path.

#include "prefattach/errors.hpp"
#include "prefattach/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace prefattach::detail {

struct CappedScale {
    // Items at least this heavy are certain.
    std::int64_t min_capped = std::numeric_limits<std::int64_t>::max();
    double scale = 0.0;

    double probability(std::int64_t w) const noexcept {
        if (w <= 0) {
            return 0.0;
        }
        return w >= min_capped ? 1.0 : scale * static_cast<double>(w);
    }
};

// `top` holds the largest weights of the prefix in descending order (at
// least min(m, prefix size) of them); `total` is the prefix sum.
inline CappedScale capped_scale(std::span<const std::int64_t> top, std::int64_t total, std::size_t m) {
    CappedScale result;
    std::size_t capped = 0;
    std::int64_t capped_sum = 0;
    while (capped < m && capped < top.size() &&
           static_cast<std::int64_t>(m - capped) * top[capped] >= total - capped_sum) {
        result.min_capped = top[capped];
        capped_sum += top[capped];
        ++capped;
    }
    const std::int64_t rest = total - capped_sum;
    result.scale = rest > 0 ? static_cast<double>(m - capped) / static_cast<double>(rest) : 0.0;
    return result;
}

inline void push_top(std::vector<std::int64_t>& top, std::int64_t w, std::size_t m) {
    auto it = std::upper_bound(top.begin(), top.end(), w, std::greater<>());
    if (static_cast<std::size_t>(it - top.begin()) >= m) {
        return;
    }
    top.insert(it, w);
    if (top.size() > m) {
        top.pop_back();
    }
}

// Bernoulli(num / den) trials, exact, mostly decided by 8 random bits
// (eight trials per 64-bit draw). With U = (r + V) / 2^8, U < num/den is
// settled by r alone unless r = floor(2^8 num / den); only then is V drawn.
// Meant for small probabilities, where r alone nearly always rejects.
class BitPool {
public:
    explicit BitPool(Rng& rng) : rng_(rng) {}

    bool bernoulli(std::int64_t num, std::int64_t den) {
        if (left_ == 0) {
            word_ = rng_();
            left_ = 8;
        }
        const auto r = static_cast<std::int64_t>(word_ & 0xff);
        word_ >>= 8;
        --left_;
        const std::int64_t scaled = num << 8;
        const std::int64_t low = r * den;
        if (low >= scaled) {
            return false;
        }
        if (low + den <= scaled) {
            return true;
        }
        return uniform01(rng_) * static_cast<double>(den) < static_cast<double>(scaled - low);
    }

private:
    Rng& rng_;
    std::uint64_t word_ = 0;
    int left_ = 0;
};

// Writes the sampled indices, sorted, into `out`. Requires at least m
// positive weights; the caller is responsible for strict pips feasibility
// of the whole population (otherwise the final probabilities are capped).
template <class W>
void chao_sample(std::span<const W> weights, std::size_t m, Rng& rng,
                 std::vector<std::size_t>& out) {
    out.clear();
    if (m == 0) {
        return;
    }
    const std::size_t n = weights.size();
    std::int64_t total = 0;
    std::vector<std::int64_t> top;
    top.reserve(m + 1);
    std::size_t idx = 0;
    for (; idx < n && out.size() < m; ++idx) {
        const auto w = static_cast<std::int64_t>(weights[idx]);
        if (w > 0) {
            out.push_back(idx);
            total += w;
            push_top(top, w, m);
        }
    }
    if (out.size() < m) {
        throw std::invalid_argument("Chao sampling needs at least m positive weights");
    }
    const auto mm = static_cast<std::int64_t>(m);
    BitPool bits(rng);
    bool prev_capped = mm * top.front() > total;
    std::vector<double> eviction(m);

    for (; idx < n; ++idx) {
        const auto w = static_cast<std::int64_t>(weights[idx]);
        if (w <= 0) {
            continue;
        }
        const std::int64_t prev_total = total;
        total += w;
        const bool capped = mm * std::max(top.front(), w) > total;
        if (!capped && !prev_capped) {
            if (w > top.back()) {
                push_top(top, w, m);
            }
            if (bits.bernoulli(mm * w, total)) {
                out[uniform_below(rng, m)] = idx;
            }
        } else {
            const CappedScale before = capped_scale(top, prev_total, m);
            push_top(top, w, m);
            const CappedScale after = capped_scale(top, total, m);
            const double accept = after.probability(w);
            if (uniform01(rng) < accept) {
                double sum = 0.0;
                for (std::size_t s = 0; s < m; ++s) {
                    const auto wi = static_cast<std::int64_t>(weights[out[s]]);
                    const double ratio = after.probability(wi) / before.probability(wi);
                    eviction[s] = std::max(0.0, (1.0 - ratio) / accept);
                    sum += eviction[s];
                }
                double target = uniform01(rng) * sum;
                std::size_t victim = m;
                std::size_t last_positive = 0;
                for (std::size_t s = 0; s < m; ++s) {
                    if (eviction[s] > 0.0) {
                        last_positive = s;
                    }
                    if (victim == m && target < eviction[s]) {
                        victim = s;
                    }
                    target -= eviction[s];
                }
                if (victim == m) {
                    victim = last_positive;  // rounding at the top end
                }
                out[victim] = idx;
            }
        }
        prev_capped = capped;
    }
    std::sort(out.begin(), out.end());
}

}  // namespace prefattach::detail
