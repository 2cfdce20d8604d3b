#include "prefattach/errors.hpp"
#include "prefattach/oracle.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <numeric>

using namespace prefattach;
using testing::within_sigma;

namespace {

Rational q(long p, long d) {
    Rational r(p, d);
    r.canonicalize();
    return r;
}

WeightedPopulation heavy_node(std::size_t n) {
    std::vector<Weight> w(n, 1);
    w[0] = 2;
    return WeightedPopulation(w);
}

bool all_in_unit_interval(const InclusionTable& t) {
    for (const auto& p : t.first_order) {
        if (p < 0 || p > 1) {
            return false;
        }
    }
    for (const auto& [tuple, p] : t.joint) {
        if (p < 0 || p > 1) {
            return false;
        }
    }
    return true;
}

void check_exact_invariants(const InclusionTable& t) {
    CHECK(t.exact);
    const Rational sum = std::accumulate(t.first_order.begin(), t.first_order.end(), Rational(0));
    CHECK(sum == static_cast<long>(t.m));
    Rational mass = 0;
    for (const auto& [s, p] : t.samples) {
        mass += p;
    }
    CHECK(mass == 1);
    CHECK(all_in_unit_interval(t));
    const auto check = check_marginalization(t);
    CHECK(check.ok);
    CHECK(check.max_residual == 0);
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("draw-by-draw enumeration") {
    const auto t = exact_dbd({2, 1, 1, 1, 1}, 2);
    CHECK(t.first_order[0] == q(3, 5));
    check_exact_invariants(t);

    const auto u = exact_dbd({1, 1, 1}, 2);
    for (const auto& p : u.first_order) {
        CHECK(p == q(2, 3));
    }
    CHECK(u.pair(0, 1) == q(1, 3));
    CHECK(u.pair(2, 0) == q(1, 3));

    CHECK(exact_dbd({3, 2, 1}, 2).first_order[0] == q(17, 20));
    CHECK_THROWS_AS(exact_dbd(WeightedPopulation(std::vector<Weight>(13, 1)), 2), EnumerationTooLarge);
    CHECK_THROWS_AS(exact_dbd(WeightedPopulation(std::vector<Weight>(8, 1)), 5), EnumerationTooLarge);
}

TEST_CASE("conditional Poisson enumeration") {
    const auto t = exact_cp({2, 1, 1, 1, 1}, 2);
    CHECK(t.first_order[0] == q(8, 11));
    check_exact_invariants(t);

    const auto u = exact_cp({4, 4, 4, 4, 4, 4}, 4);
    for (const auto& p : u.first_order) {
        CHECK(p == q(2, 3));
    }
    check_exact_invariants(u);

    const auto v = exact_cp({3, 2, 1}, 2);
    CHECK(v.first_order == std::vector<Rational>{q(1, 1), q(4, 5), q(1, 5)});
    CHECK_THROWS_AS(exact_cp({10, 1, 1}, 2), InfeasibleStrPips);
    CHECK_THROWS_AS(exact_cp(WeightedPopulation(std::vector<Weight>(21, 1)), 2), EnumerationTooLarge);
}

TEST_CASE("systematic enumeration") {
    const auto arr = arrange_population({3, 3, 2, 2}, OrderPolicy::DegreeDescending);
    const auto t = exact_systematic(arr, 2);
    CHECK(t.samples.size() == 3);
    CHECK(t.samples.at(Sample({0, 1})) == q(1, 5));
    CHECK(t.samples.at(Sample({0, 2})) == q(2, 5));
    CHECK(t.samples.at(Sample({1, 3})) == q(2, 5));
    CHECK(t.pair(0, 3) == 0);
    check_exact_invariants(t);

    CHECK(exact_systematic(OrderedWeightArray::identity({1, 1}), 2).pair(0, 1) == 1);

    const auto alt = exact_systematic(OrderedWeightArray::identity({3, 2, 3, 2}), 2);
    CHECK(alt.pair(0, 2) == q(3, 5));
    CHECK(alt.pair(1, 3) == q(2, 5));
    check_exact_invariants(alt);

    CHECK_THROWS_AS(exact_systematic(OrderedWeightArray::identity({5, 1, 1}), 2), DuplicateSelectionRisk);
}

TEST_CASE("random systematic enumeration") {
    const auto t = exact_random_systematic({3, 3, 2, 2}, 2);
    CHECK(t.pair(0, 1) == q(10, 30));
    CHECK(t.pair(2, 3) == q(4, 30));
    CHECK(t.pair(0, 2) + t.pair(0, 3) + t.pair(1, 2) + t.pair(1, 3) == q(16, 30));
    check_exact_invariants(t);

    const auto u = exact_random_systematic({1, 1, 1}, 2);
    CHECK(u.pair(0, 1) == q(1, 3));
    CHECK(u.pair(1, 2) == q(1, 3));
    CHECK(exact_random_systematic({2, 1, 1}, 2).first_order ==
          std::vector<Rational>{q(1, 1), q(1, 2), q(1, 2)});
    CHECK_THROWS_AS(exact_random_systematic(WeightedPopulation(std::vector<Weight>(9, 1)), 2),
                    EnumerationTooLarge);
    // Circular traversal gives the same tables.
    CHECK(exact_random_systematic({3, 3, 2, 2}, 2, SystematicMode::Circular).samples == t.samples);
}

TEST_CASE("random systematic pair formula matches the permutation enumeration") {
    Rng rng(31);
    int compared = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 2 + uniform_below(rng, 6);
        std::vector<Weight> w(n);
        for (auto& x : w) {
            x = static_cast<Weight>(1 + uniform_below(rng, 4));
        }
        const std::size_t m = 1 + uniform_below(rng, std::min<std::size_t>(3, n));
        const WeightedPopulation pop(w);
        if (static_cast<Weight>(m) * *std::max_element(w.begin(), w.end()) > pop.total()) {
            CHECK_THROWS_AS(random_systematic_joint(pop, m, 0, 1), DuplicateSelectionRisk);
            continue;
        }
        const auto table = exact_random_systematic(pop, m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                CHECK(random_systematic_joint(pop, m, i, j) == table.pair(i, j));
                ++compared;
            }
        }
    }
    CHECK(compared > 100);
    CHECK_THROWS_AS(random_systematic_joint({1, 1, 1}, 2, 1, 1), std::invalid_argument);
}

TEST_CASE("higher-order tables") {
    const WeightedPopulation pop({5, 4, 3, 3, 2, 2, 1});
    for (std::size_t m : {3u, 4u}) {
        check_exact_invariants(exact_dbd(pop, m));
        check_exact_invariants(exact_cp(pop, m));
        check_exact_invariants(exact_random_systematic(pop, m));
        check_exact_invariants(exact_systematic(OrderedWeightArray::identity(pop), m));
    }
    const auto t = exact_cp(pop, 3);
    const std::array<std::size_t, 3> triple{4, 0, 2};
    Rational direct = 0;
    for (const auto& [s, p] : t.samples) {
        if (s.contains(0) && s.contains(2) && s.contains(4)) {
            direct += p;
        }
    }
    CHECK(t.probability(triple) == direct);
    CHECK(direct > 0);
    // Deeper than the stored joint orders: answered from the samples.
    const auto c = exact_cp(WeightedPopulation(std::vector<Weight>(8, 1)), 6);
    const std::array<std::size_t, 5> five{0, 1, 2, 3, 4};
    CHECK(c.probability(five) == q(3, 28));
    check_exact_invariants(c);
}

TEST_CASE("single-item designs coincide") {
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + uniform_below(rng, 8);
        std::vector<Weight> w(n);
        for (auto& x : w) {
            x = static_cast<Weight>(uniform_below(rng, 7));
        }
        w[n - 1] += 1;
        const WeightedPopulation pop(w);
        const auto a = exact_dbd(pop, 1);
        CHECK(exact_random_systematic(pop, 1).samples == a.samples);
        CHECK(exact_systematic(OrderedWeightArray::identity(pop), 1).samples == a.samples);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(a.first_order[i] == q(w[i], pop.total()));
        }
        // Conditional Poisson: odds w/(W - w), a forced item takes everything.
        const auto c = exact_cp(pop, 1);
        Rational odds_total = 0;
        std::vector<Rational> odds(n);
        const auto forced = std::find(w.begin(), w.end(), pop.total());
        for (std::size_t i = 0; i < n; ++i) {
            if (forced != w.end()) {
                odds[i] = static_cast<std::size_t>(forced - w.begin()) == i ? 1 : 0;
            } else {
                odds[i] = q(w[i], pop.total() - w[i]);
            }
            odds_total += odds[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            Rational expected = odds[i] / odds_total;
            expected.canonicalize();
            CHECK(c.first_order[i] == expected);
        }
    }
    CHECK(exact_cp({3, 3, 3}, 1).first_order[0] == q(1, 3));
}

TEST_CASE("heavy-node closed forms") {
    const auto r5 = table1_closed_forms(5);
    CHECK(r5.strpips == q(2, 3));
    CHECK(r5.draw_by_draw == q(3, 5));
    CHECK(r5.conditional_poisson == q(8, 11));
    const auto r3 = table1_closed_forms(3);
    CHECK(r3.strpips == 1);
    CHECK(r3.conditional_poisson == 1);
    CHECK(exact_cp({2, 1, 1}, 2).first_order[0] == 1);
    CHECK_THROWS_AS(table1_closed_forms(2), std::invalid_argument);

    const auto big = table1_closed_forms(1'000'000);
    CHECK(std::abs(big.draw_by_draw_ratio.get_d() - 1.0) < 1e-5);
    CHECK(std::abs(big.conditional_poisson_ratio.get_d() - 1.0) < 1e-5);

    for (std::size_t n = 3; n <= 12; ++n) {
        const auto row = table1_closed_forms(n);
        const auto dbd = exact_dbd(heavy_node(n), 2);
        const auto cp = exact_cp(heavy_node(n), 2);
        CHECK(dbd.first_order[0] == row.draw_by_draw);
        CHECK(cp.first_order[0] == row.conditional_poisson);
        CHECK(row.strpips - row.draw_by_draw == row.draw_by_draw_difference);
        CHECK(row.conditional_poisson - row.strpips == row.conditional_poisson_difference);
        CHECK(row.strpips / row.draw_by_draw == row.draw_by_draw_ratio);
        CHECK(row.strpips / row.conditional_poisson == row.conditional_poisson_ratio);
    }
}

TEST_CASE("Monte Carlo tables") {
    Rng rng = make_stream(51, 0);
    const auto one = monte_carlo_inclusion(DesignSpec::draw_by_draw(), {3, 2, 1}, 2, 1, rng);
    CHECK_FALSE(one.exact);
    for (const auto& p : one.first_order) {
        CHECK((p == 0 || p == 1));
    }

    const std::uint64_t reps = 1'000'000;
    const auto chao = monte_carlo_inclusion(DesignSpec::chao(), {2, 1, 1, 1, 1}, 2, reps, rng);
    CHECK(within_sigma(chao.first_order[0], q(2, 3), reps));
    const auto dbd = monte_carlo_inclusion(DesignSpec::draw_by_draw(), {3, 2, 1}, 2, reps, rng);
    CHECK(within_sigma(dbd.first_order[0], q(17, 20), reps));

    const auto check = check_marginalization(chao);
    CHECK(check.max_residual < q(5, 1000));
    CHECK(monte_carlo_inclusion(DesignSpec::chao(), {1, 1}, 2, 10, rng).first_order[0] == 1);
    CHECK_THROWS_AS(monte_carlo_inclusion(DesignSpec::chao(), {1, 1}, 2, 0, rng), std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with the exact oracles") {
    const std::uint64_t reps = 200'000;
    const std::vector<WeightedPopulation> pops{{2, 1, 1, 1, 1}, {3, 3, 2, 2}, {4, 3, 2, 1, 1, 1}};
    std::uint64_t seed = 60;
    for (const auto& pop : pops) {
        const std::vector<std::pair<DesignSpec, InclusionTable>> cases{
            {DesignSpec::draw_by_draw(), exact_dbd(pop, 2)},
            {DesignSpec::conditional_poisson(), exact_cp(pop, 2)},
            {DesignSpec::random_systematic(), exact_random_systematic(pop, 2)},
            {DesignSpec::ordered_systematic(OrderPolicy::AgeOrder),
             exact_systematic(arrange_population(pop, OrderPolicy::AgeOrder), 2)},
            {DesignSpec::ordered_systematic(OrderPolicy::DegreeDescending),
             exact_systematic(arrange_population(pop, OrderPolicy::DegreeDescending), 2)},
        };
        for (const auto& [design, exact] : cases) {
            Rng rng = make_stream(seed++, 0);
            const auto mc = monte_carlo_inclusion(design, pop, 2, reps, rng);
            for (std::size_t i = 0; i < pop.size(); ++i) {
                CHECK(within_sigma(mc.first_order[i], exact.first_order[i], reps));
            }
            for (const auto& [tuple, p] : exact.joint) {
                CHECK(within_sigma(mc.joint.at(tuple), p, reps));
            }
        }
    }
}

TEST_CASE("marginalization detects inconsistent tables") {
    auto t = exact_cp({3, 2, 2, 1}, 2);
    CHECK(check_marginalization(t).ok);
    t.joint[{0, 1}] += q(1, 100);
    const auto bad = check_marginalization(t);
    CHECK_FALSE(bad.ok);
    CHECK(bad.max_residual == q(1, 100));
}

TEST_CASE("JSON export") {
    const auto j = to_json(exact_dbd({1, 1, 1}, 2));
    CHECK(j["m"] == 2);
    CHECK(j["exact"] == true);
    CHECK(j["weights"] == nlohmann::json::array({1, 1, 1}));
    CHECK(j["first_order"][0] == "2/3");
    CHECK(j["joint"].size() == 3);
    CHECK(j["joint"][0]["tuple"] == nlohmann::json::array({0, 1}));
    CHECK(j["joint"][1]["tuple"] == nlohmann::json::array({0, 2}));
    CHECK(j["joint"][2]["p"] == "1/3");
    const auto whole = to_json(exact_cp({1, 1}, 2));
    CHECK(whole["first_order"][0] == "1/1");
}

}
