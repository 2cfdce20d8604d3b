#include "prefattach/errors.hpp"
#include "prefattach/experiments.hpp"
#include "prefattach/generator.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

using namespace prefattach;

TEST_SUITE("experiments") {

TEST_CASE("degree ccdf") {
    const std::vector<std::uint32_t> d{1, 1, 2, 3, 3, 3, 7};
    const auto s = degree_ccdf(d);
    REQUIRE(s.size() == 4);
    CHECK(s[0].degree == 1);
    CHECK(s[0].count == 7);
    CHECK(s[1].degree == 2);
    CHECK(s[1].count == 5);
    CHECK(s[2].count == 4);
    CHECK(s[3].degree == 7);
    CHECK(s[3].count == 1);
    CHECK(degree_ccdf(std::vector<std::uint32_t>{}).empty());

    const auto k4 = degree_ccdf(complete_graph(4));
    REQUIRE(k4.size() == 1);
    CHECK(k4[0].count == 4);

    std::ostringstream out;
    write_ccdf_csv(out, s);
    CHECK(out.str() == "degree,count\n1,7\n2,5\n3,4\n7,1\n");
}

TEST_CASE("ccdf slope") {
    // count = 1000 * k^-2 on k = 1..10 is an exact line in log-log.
    CcdfSeries series;
    for (std::uint32_t k = 1; k <= 10; ++k) {
        series.push_back({k, static_cast<std::uint64_t>(std::llround(1e4 / (k * k)))});
    }
    const auto fit = ccdf_slope(series, 2, 5);
    CHECK(fit.k_cut == 10);
    CHECK(fit.points == 9);
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.01));
    CHECK(std::exp(fit.intercept) == doctest::Approx(1e4).epsilon(0.02));

    CHECK(ccdf_slope(series, 2, 200).k_cut == 7);
    CHECK_THROWS_AS(ccdf_slope(series, 10, 5), InsufficientData);
    CHECK_THROWS_AS(ccdf_slope({}, 1, 5), InsufficientData);
}

TEST_CASE("Yule-Simon reference") {
    CHECK(yule_simon_pmf(1, 2) == Rational(2, 3));
    CHECK(yule_simon_pmf(2, 2) == Rational(1, 6));
    CHECK(yule_simon_pmf(1, 1) == Rational(1, 2));
    Rational total = 0;
    for (std::uint64_t k = 1; k <= 400; ++k) {
        total += yule_simon_pmf(k, 3);
    }
    CHECK(total < 1);
    CHECK(total.get_d() > 0.99999);
    CHECK_THROWS_AS(yule_simon_pmf(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(yule_simon_pmf(1, 0), std::invalid_argument);
}

TEST_CASE("power-law reference") {
    CHECK(powerlaw_ccdf_reference(3.0, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(powerlaw_ccdf_reference(3.0, 2.0, 2.0) == doctest::Approx(0.25));
    CHECK(powerlaw_ccdf_reference(2.5, 1.5, 4.0) == doctest::Approx(0.125));
    CHECK_THROWS_AS(powerlaw_ccdf_reference(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(powerlaw_ccdf_reference(3.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("pooled degrees") {
    ExperimentConfig config{DesignSpec::draw_by_draw(4), 50, 2, 3, 1, {}};
    const auto pooled = pooled_degrees(config);
    CHECK(pooled.size() == 150);
    CHECK(std::accumulate(pooled.begin(), pooled.end(), std::uint64_t{0}) == 3 * 2 * (1 + 48 * 2));
    const Graph first = generate({50, 2}, DesignSpec::draw_by_draw(4));
    CHECK(std::equal(first.degrees().begin(), first.degrees().end(), pooled.begin()));
    config.reps = 0;
    CHECK_THROWS_AS(pooled_degrees(config), std::invalid_argument);
}

TEST_CASE("ranks on the bare clique") {
    // n = m: K_m is all tied.
    const auto report = rank_probabilities(DesignSpec::chao(), 3, 3, 10);
    for (VertexId v = 0; v < 3; ++v) {
        CHECK(report.probability(v) == doctest::Approx(1.0 / 3));
        CHECK(report.probability(v, TieRule::UniqueOnly) == 0.0);
    }
    const auto single = rank_probabilities(DesignSpec::draw_by_draw(), 1, 1, 5);
    CHECK(single.probability(0) == 1.0);
}

TEST_CASE("ranks and overthrows") {
    for (const auto& design : {DesignSpec::draw_by_draw(9), DesignSpec::conditional_poisson(9), DesignSpec::chao(9),
                               DesignSpec::random_systematic(9)}) {
        const ExperimentConfig config{design, 60, 2, 300, 1, {}};
        const auto stats = growth_statistics(config);
        const auto probs = stats.ranks.probabilities(60);
        CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(1.0));
        const auto strict = stats.ranks.probabilities(60, TieRule::UniqueOnly);
        for (std::size_t v = 0; v < 60; ++v) {
            CHECK(strict[v] <= probs[v] + 1e-12);
        }
        CHECK(std::accumulate(strict.begin(), strict.end(), 0.0) <= 1.0 + 1e-12);

        const auto& o = stats.overthrows;
        CHECK(o.occurrences.size() == 61);
        // Sizes 3 and 4 are always tied at the top when m = 2.
        CHECK(o.occurrences[2] == 0);
        CHECK(o.occurrences[3] == 0);
        CHECK(o.occurrences[4] == 0);
        CHECK(o.probability(5) > 0.0);
        CHECK(o.max_per_run >= 1);
        CHECK(o.mean_total() >= 1.0);
        CHECK(o.mean_total() <= static_cast<double>(o.max_per_run));
        for (std::size_t t = 1; t <= 60; ++t) {
            CHECK(o.probability(t) <= 1.0);
        }
    }
}

TEST_CASE("results do not depend on the thread count") {
    ExperimentConfig config{DesignSpec::chao(21), 80, 2, 64, 1, {}};
    const auto one = growth_statistics(config);
    config.threads = 4;
    std::uint64_t last = 0;
    bool monotone = true;
    config.progress = [&](std::uint64_t done, std::uint64_t total) {
        monotone = monotone && done > last && done <= total;
        last = done;
    };
    const auto four = growth_statistics(config);
    CHECK(one.ranks.tie_counts == four.ranks.tie_counts);
    CHECK(one.overthrows.occurrences == four.overthrows.occurrences);
    CHECK(one.overthrows.max_per_run == four.overthrows.max_per_run);
    CHECK(monotone);
    CHECK(last == 64);

    ExperimentConfig pooled{DesignSpec::conditional_poisson(3), 40, 2, 9, 1, {}};
    const auto a = pooled_degrees(pooled);
    pooled.threads = 3;
    CHECK(pooled_degrees(pooled) == a);
}

TEST_CASE("power-law fit of overthrows") {
    OverthrowRecord record;
    record.reps = 1'000'000;
    record.n = 200;
    record.occurrences.assign(201, 0);
    for (std::size_t t = 3; t <= 200; ++t) {
        record.occurrences[t] = static_cast<std::uint64_t>(std::llround(1e6 * 0.7 / t));
    }
    const auto fit = fit_power_law(record, -1.0, 20);
    CHECK(fit.c == doctest::Approx(0.7).epsilon(0.001));
    CHECK(fit.correlation > 0.9999);
    CHECK(fit.points == 181);
    CHECK(pearson_power_correlation(record, -1.0, 20) == doctest::Approx(fit.correlation));
    CHECK(pearson_power_correlation(record, 1.0, 20) < 0);

    OverthrowRecord empty;
    empty.reps = 10;
    empty.occurrences.assign(50, 0);
    CHECK_THROWS_AS(fit_power_law(empty, -1.0, 20), InsufficientData);
}

TEST_CASE("csv writers") {
    OverthrowRecord record;
    record.reps = 3;
    record.n = 3;
    record.occurrences = {0, 0, 0, 3};
    std::ostringstream o;
    write_overthrow_csv(o, record);
    CHECK(o.str() == "size,probability\n1,0\n2,0\n3,1\n");

    RankReport report;
    report.n = 3;
    report.reps = 3;
    report.tie_counts = {{{1, 2}}, {{2, 1}}, {{2, 1}}};
    std::ostringstream r;
    write_rank_csv(r, report, 3);
    CHECK(r.str() == "vertex,probability\n0,0.666666666667\n1,0.166666666667\n2,0.166666666667\n");
    std::ostringstream u;
    write_rank_csv(u, report, 2, TieRule::UniqueOnly);
    CHECK(u.str() == "vertex,probability\n0,0.666666666667\n1,0\n");
}

}
