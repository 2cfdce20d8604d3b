#pragma once

// Degree distribution, top-rank and overthrow experiments over repeated
// growth runs, plus the reference laws they are compared against.

#include "prefattach/design.hpp"
#include "prefattach/graph.hpp"
#include "prefattach/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace prefattach {

struct CcdfPoint {
    std::uint32_t degree = 0;
    std::uint64_t count = 0;  // vertices with degree >= `degree`
};
using CcdfSeries = std::vector<CcdfPoint>;

// One point per distinct degree, ascending.
CcdfSeries degree_ccdf(std::span<const std::uint32_t> degrees);
CcdfSeries degree_ccdf(const Graph& g);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::uint32_t k_min = 0;
    std::uint32_t k_cut = 0;  // largest degree with count >= min_count
    std::size_t points = 0;
};

// OLS of log(count) on log(degree) over degrees in [k_min, k_cut].
// Throws InsufficientData with fewer than two points.
SlopeFit ccdf_slope(const CcdfSeries& series, std::uint32_t k_min, std::uint64_t min_count = 5);

// rho * rho! * (k-1)! / (k+rho)!
Rational yule_simon_pmf(std::uint64_t k, std::uint64_t rho);

// c / (gamma - 1) * x^-(gamma - 1)
double powerlaw_ccdf_reference(double gamma, double c, double x);

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total)>;

struct ExperimentConfig {
    DesignSpec design;
    std::size_t n = 1000;
    std::size_t m = 2;
    std::uint64_t reps = 1;
    unsigned threads = 1;
    ProgressFn progress;  // called from worker threads, serialized
};

// Final degree sequences of `reps` runs, pooled. Run r uses
// make_stream(design.seed, r).
std::vector<std::uint32_t> pooled_degrees(const ExperimentConfig& config);

enum class TieRule {
    Split,       // each of k tied top vertices gets 1/k
    UniqueOnly,  // only a unique top vertex counts
};

struct RankReport {
    DesignSpec design;
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t reps = 0;
    // tie_counts[v][k]: runs that ended with v among k vertices of maximum
    // degree.
    std::vector<std::map<std::uint32_t, std::uint64_t>> tie_counts;

    double probability(VertexId v, TieRule rule = TieRule::Split) const;
    std::vector<double> probabilities(std::size_t top, TieRule rule = TieRule::Split) const;
};

struct OverthrowRecord {
    std::size_t n = 0;
    std::uint64_t reps = 0;
    // occurrences[t]: runs in which the graph of size t has a unique
    // maximum degree while the graph of size t - 1 had a tied one.
    std::vector<std::uint64_t> occurrences;
    std::uint64_t max_per_run = 0;

    double probability(std::size_t t) const;
    double mean_total() const;
};

struct GrowthStatistics {
    RankReport ranks;
    OverthrowRecord overthrows;
};

// Ranks and overthrows from the same runs (degrees only). Results depend
// on (design.seed, reps) and not on the thread count.
GrowthStatistics growth_statistics(const ExperimentConfig& config);

RankReport rank_probabilities(const DesignSpec& design, std::size_t n, std::size_t m,
                              std::uint64_t reps, unsigned threads = 1);
OverthrowRecord overthrow_distribution(const DesignSpec& design, std::size_t n, std::size_t m,
                                       std::uint64_t reps, unsigned threads = 1);

struct PowerFit {
    double c = 0.0;
    double correlation = 0.0;
    std::size_t points = 0;
};

// Least-squares c for p(t) ~ c * t^exponent over t >= x_min, and the
// Pearson correlation between p(t) and the fit on the raw scale.
PowerFit fit_power_law(const OverthrowRecord& record, double exponent, std::size_t x_min);
double pearson_power_correlation(const OverthrowRecord& record, double exponent, std::size_t x_min);

void write_ccdf_csv(std::ostream& out, const CcdfSeries& series);
void write_overthrow_csv(std::ostream& out, const OverthrowRecord& record);
void write_rank_csv(std::ostream& out, const RankReport& report, std::size_t top,
                    TieRule rule = TieRule::Split);

}  // namespace prefattach
