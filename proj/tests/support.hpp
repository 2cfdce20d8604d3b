#pragma once

#include "prefattach/rational.hpp"

#include <cmath>
#include <cstdint>

namespace testing {

inline double to_double(const prefattach::Rational& r) { return r.get_d(); }

// |hits/reps - p| within k binomial standard deviations. A degenerate p
// (0 or 1) demands an exact match.
inline bool within_sigma(double estimate, double p, std::uint64_t reps, double k = 4.0) {
    const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
    if (sd == 0.0) {
        return estimate == p;
    }
    return std::abs(estimate - p) <= k * sd;
}

inline bool within_sigma(const prefattach::Rational& estimate, const prefattach::Rational& p,
                         std::uint64_t reps, double k = 4.0) {
    return within_sigma(estimate.get_d(), p.get_d(), reps, k);
}

}  // namespace testing
