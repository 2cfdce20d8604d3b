#include "prefattach/experiments.hpp"

#include "prefattach/errors.hpp"
#include "prefattach/generator.hpp"
#include "prefattach/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace prefattach {

CcdfSeries degree_ccdf(std::span<const std::uint32_t> degrees) {
    std::map<std::uint32_t, std::uint64_t> histogram;
    for (std::uint32_t d : degrees) {
        ++histogram[d];
    }
    CcdfSeries series;
    series.reserve(histogram.size());
    std::uint64_t remaining = degrees.size();
    for (const auto& [d, count] : histogram) {
        series.push_back({d, remaining});
        remaining -= count;
    }
    return series;
}

CcdfSeries degree_ccdf(const Graph& g) { return degree_ccdf(g.degrees()); }

SlopeFit ccdf_slope(const CcdfSeries& series, std::uint32_t k_min, std::uint64_t min_count) {
    SlopeFit fit;
    fit.k_min = k_min;
    for (const auto& p : series) {
        if (p.count >= min_count) {
            fit.k_cut = std::max(fit.k_cut, p.degree);
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : series) {
        if (p.degree < k_min || p.degree > fit.k_cut || p.degree == 0 || p.count == 0) {
            continue;
        }
        const double x = std::log(static_cast<double>(p.degree));
        const double y = std::log(static_cast<double>(p.count));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++fit.points;
    }
    const double k = static_cast<double>(fit.points);
    const double denom = k * sxx - sx * sx;
    if (fit.points < 2 || denom <= 0) {
        throw InsufficientData("need at least two CCDF points in [k_min, k_cut]");
    }
    fit.slope = (k * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / k;
    return fit;
}

Rational yule_simon_pmf(std::uint64_t k, std::uint64_t rho) {
    if (k < 1 || rho < 1) {
        throw std::invalid_argument("k and rho must be at least 1");
    }
    BigInt num = rho;
    for (std::uint64_t j = 2; j <= rho; ++j) {
        num *= static_cast<unsigned long>(j);
    }
    BigInt den = 1;
    for (std::uint64_t j = 0; j <= rho; ++j) {
        den *= static_cast<unsigned long>(k + j);
    }
    Rational p(num, den);
    p.canonicalize();
    return p;
}

double powerlaw_ccdf_reference(double gamma, double c, double x) {
    if (!(gamma > 1.0)) {
        throw std::invalid_argument("gamma must exceed 1");
    }
    if (!(c > 0.0) || !(x > 0.0)) {
        throw std::invalid_argument("c and x must be positive");
    }
    return c / (gamma - 1.0) * std::pow(x, -(gamma - 1.0));
}

namespace {

void require_config(const ExperimentConfig& config) {
    GrowthParams{config.n, config.m}.validate();
    config.design.validate(config.m);
    if (config.reps == 0) {
        throw std::invalid_argument("reps must be at least 1");
    }
}

// Runs body(worker, rep) for every rep on up to `threads` workers.
template <class Body>
unsigned parallel_reps(const ExperimentConfig& config, Body body) {
    const unsigned workers = static_cast<unsigned>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(config.threads, config.reps)));
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> finished{0};
    std::mutex progress_mutex;
    const std::uint64_t stride = std::max<std::uint64_t>(1, config.reps / 100);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&](unsigned worker) {
        try {
            for (std::uint64_t rep = next++; rep < config.reps; rep = next++) {
                body(worker, rep);
                const std::uint64_t done = ++finished;
                if (config.progress && (done % stride == 0 || done == config.reps)) {
                    std::lock_guard lock(progress_mutex);
                    config.progress(done, config.reps);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = config.reps;
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return workers;
}

// Degree-only growth with running maximum bookkeeping.
class DegreeRun {
public:
    DegreeRun(const DesignSpec& design, std::size_t n, std::size_t m)
        : n_(n), m_(m), sampler_(design, m) {
        degrees_.reserve(n);
        count_.reserve(n + 1);
    }

    // on_size(t, unique_max) after each graph size t > m.
    template <class OnSize>
    void run(Rng& rng, OnSize on_size) {
        degrees_.assign(m_, static_cast<std::uint32_t>(m_ - 1));
        count_.assign(m_ + 1, 0);
        count_[m_ - 1] = static_cast<std::uint32_t>(m_);
        max_ = static_cast<std::uint32_t>(m_ - 1);
        sampler_.reset(degrees_);
        const auto born = static_cast<std::uint32_t>(m_);
        for (std::size_t size = m_ + 1; size <= n_; ++size) {
            sampler_.draw(degrees_, rng, targets_);
            for (VertexId v : targets_) {
                --count_[degrees_[v]];
                const std::uint32_t d = ++degrees_[v];
                if (d >= count_.size()) {
                    count_.resize(d + 1, 0);
                }
                ++count_[d];
                max_ = std::max(max_, d);
            }
            degrees_.push_back(born);
            ++count_[born];
            max_ = std::max(max_, born);
            sampler_.commit(degrees_, targets_);
            on_size(size, count_[max_] == 1);
        }
    }

    std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
    std::uint32_t max_degree() const noexcept { return max_; }
    std::uint32_t max_count() const noexcept { return count_[max_]; }

private:
    std::size_t n_;
    std::size_t m_;
    AttachmentSampler sampler_;
    std::vector<std::uint32_t> degrees_;
    std::vector<std::uint32_t> count_;
    std::uint32_t max_ = 0;
    std::vector<VertexId> targets_;
};

}  // namespace

std::vector<std::uint32_t> pooled_degrees(const ExperimentConfig& config) {
    require_config(config);
    // Each run lands in its own slot, so the pooled order is fixed.
    std::vector<std::uint32_t> pooled(config.reps * config.n);
    const unsigned workers = std::max(1u, config.threads);
    std::vector<std::unique_ptr<DegreeRun>> runs(workers);
    parallel_reps(config, [&](unsigned worker, std::uint64_t rep) {
        if (!runs[worker]) {
            runs[worker] = std::make_unique<DegreeRun>(config.design, config.n, config.m);
        }
        Rng rng = make_stream(config.design.seed, rep);
        runs[worker]->run(rng, [](std::size_t, bool) {});
        const auto d = runs[worker]->degrees();
        std::copy(d.begin(), d.end(), pooled.begin() + static_cast<std::ptrdiff_t>(rep * config.n));
    });
    return pooled;
}

double RankReport::probability(VertexId v, TieRule rule) const {
    if (v >= tie_counts.size() || reps == 0) {
        return 0.0;
    }
    double credit = 0.0;
    for (const auto& [k, count] : tie_counts[v]) {
        if (rule == TieRule::Split) {
            credit += static_cast<double>(count) / k;
        } else if (k == 1) {
            credit += static_cast<double>(count);
        }
    }
    return credit / static_cast<double>(reps);
}

std::vector<double> RankReport::probabilities(std::size_t top, TieRule rule) const {
    std::vector<double> result;
    for (std::size_t v = 0; v < std::min(top, n); ++v) {
        result.push_back(probability(static_cast<VertexId>(v), rule));
    }
    return result;
}

double OverthrowRecord::probability(std::size_t t) const {
    if (t >= occurrences.size() || reps == 0) {
        return 0.0;
    }
    return static_cast<double>(occurrences[t]) / static_cast<double>(reps);
}

double OverthrowRecord::mean_total() const {
    std::uint64_t total = 0;
    for (std::uint64_t c : occurrences) {
        total += c;
    }
    return reps == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(reps);
}

GrowthStatistics growth_statistics(const ExperimentConfig& config) {
    require_config(config);
    struct Local {
        std::unique_ptr<DegreeRun> run;
        std::vector<std::map<std::uint32_t, std::uint64_t>> ties;
        std::vector<std::uint64_t> occurrences;
        std::uint64_t max_per_run = 0;
    };
    const unsigned slots = std::max(1u, config.threads);
    std::vector<Local> locals(slots);
    parallel_reps(config, [&](unsigned worker, std::uint64_t rep) {
        Local& local = locals[worker];
        if (!local.run) {
            local.run = std::make_unique<DegreeRun>(config.design, config.n, config.m);
            local.ties.resize(config.n);
            local.occurrences.assign(config.n + 1, 0);
        }
        Rng rng = make_stream(config.design.seed, rep);
        bool tied_before = config.m > 1;  // K_m: all m vertices share the top
        std::uint64_t overthrows = 0;
        local.run->run(rng, [&](std::size_t size, bool unique) {
            if (unique && tied_before) {
                ++local.occurrences[size];
                ++overthrows;
            }
            tied_before = !unique;
        });
        local.max_per_run = std::max(local.max_per_run, overthrows);
        const auto degrees = local.run->degrees();
        const std::uint32_t top = local.run->max_degree();
        const std::uint32_t k = local.run->max_count();
        for (std::size_t v = 0; v < degrees.size(); ++v) {
            if (degrees[v] == top) {
                ++local.ties[v][k];
            }
        }
    });

    GrowthStatistics stats;
    stats.ranks.design = config.design;
    stats.ranks.n = config.n;
    stats.ranks.m = config.m;
    stats.ranks.reps = config.reps;
    stats.ranks.tie_counts.resize(config.n);
    stats.overthrows.n = config.n;
    stats.overthrows.reps = config.reps;
    stats.overthrows.occurrences.assign(config.n + 1, 0);
    for (const auto& local : locals) {
        if (!local.run) {
            continue;
        }
        for (std::size_t v = 0; v < config.n; ++v) {
            for (const auto& [k, count] : local.ties[v]) {
                stats.ranks.tie_counts[v][k] += count;
            }
        }
        for (std::size_t t = 0; t <= config.n; ++t) {
            stats.overthrows.occurrences[t] += local.occurrences[t];
        }
        stats.overthrows.max_per_run = std::max(stats.overthrows.max_per_run, local.max_per_run);
    }
    return stats;
}

RankReport rank_probabilities(const DesignSpec& design, std::size_t n, std::size_t m,
                              std::uint64_t reps, unsigned threads) {
    ExperimentConfig config{design, n, m, reps, threads, {}};
    return growth_statistics(config).ranks;
}

OverthrowRecord overthrow_distribution(const DesignSpec& design, std::size_t n, std::size_t m,
                                       std::uint64_t reps, unsigned threads) {
    ExperimentConfig config{design, n, m, reps, threads, {}};
    return growth_statistics(config).overthrows;
}

PowerFit fit_power_law(const OverthrowRecord& record, double exponent, std::size_t x_min) {
    std::vector<double> p;
    std::vector<double> f;
    std::size_t nonzero = 0;
    for (std::size_t t = std::max<std::size_t>(x_min, 1); t < record.occurrences.size(); ++t) {
        p.push_back(record.probability(t));
        f.push_back(std::pow(static_cast<double>(t), exponent));
        nonzero += record.occurrences[t] > 0 ? 1 : 0;
    }
    if (nonzero < 2) {
        throw InsufficientData("need at least two sizes with a nonzero probability");
    }
    const double k = static_cast<double>(p.size());
    double mp = 0, mf = 0, fp = 0, ff = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mp += p[i];
        mf += f[i];
        fp += f[i] * p[i];
        ff += f[i] * f[i];
    }
    mp /= k;
    mf /= k;
    double cov = 0, vp = 0, vf = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cov += (p[i] - mp) * (f[i] - mf);
        vp += (p[i] - mp) * (p[i] - mp);
        vf += (f[i] - mf) * (f[i] - mf);
    }
    if (vp <= 0 || vf <= 0) {
        throw InsufficientData("zero variance, correlation undefined");
    }
    PowerFit fit;
    fit.c = fp / ff;
    // Pearson is invariant to the positive scale c.
    fit.correlation = cov / std::sqrt(vp * vf);
    fit.points = p.size();
    return fit;
}

double pearson_power_correlation(const OverthrowRecord& record, double exponent, std::size_t x_min) {
    return fit_power_law(record, exponent, x_min).correlation;
}

namespace {

std::string decimal(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

void write_ccdf_csv(std::ostream& out, const CcdfSeries& series) {
    out << "degree,count\n";
    for (const auto& p : series) {
        out << p.degree << ',' << p.count << '\n';
    }
}

void write_overthrow_csv(std::ostream& out, const OverthrowRecord& record) {
    out << "size,probability\n";
    for (std::size_t t = 1; t < record.occurrences.size(); ++t) {
        out << t << ',' << decimal(record.probability(t)) << '\n';
    }
}

void write_rank_csv(std::ostream& out, const RankReport& report, std::size_t top, TieRule rule) {
    out << "vertex,probability\n";
    const auto probs = report.probabilities(top, rule);
    for (std::size_t v = 0; v < probs.size(); ++v) {
        out << v << ',' << decimal(probs[v]) << '\n';
    }
}

}  // namespace prefattach
