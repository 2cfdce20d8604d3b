#include "prefattach/generator.hpp"
#include "prefattach/graph.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

using namespace prefattach;

namespace {

std::vector<std::uint32_t> degrees_of(const Graph& g) { return {g.degrees().begin(), g.degrees().end()}; }

Graph from_edges(std::size_t n, std::initializer_list<std::pair<VertexId, VertexId>> edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
        g.add_edge(u, v);
    }
    return g;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("complete graphs") {
    CHECK_THROWS_AS(complete_graph(0), std::invalid_argument);
    const Graph k1 = complete_graph(1);
    CHECK(k1.vertex_count() == 1);
    CHECK(k1.edge_count() == 0);
    const Graph k2 = complete_graph(2);
    CHECK(k2.edge_count() == 1);
    CHECK(degrees_of(k2) == std::vector<std::uint32_t>{1, 1});
    const Graph k4 = complete_graph(4);
    CHECK(k4.edge_count() == 6);
    CHECK(degrees_of(k4) == std::vector<std::uint32_t>{3, 3, 3, 3});
}

TEST_CASE("newborns") {
    Graph g = complete_graph(2);
    const VertexId both[2] = {0, 1};
    CHECK(g.add_newborn(both) == 2);
    CHECK(degrees_of(g) == std::vector<std::uint32_t>{2, 2, 2});
    g.add_newborn(both);
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 5);
    CHECK(degrees_of(g) == std::vector<std::uint32_t>{3, 3, 2, 2});
    CHECK(g.degree_total() == 10);

    const VertexId one[1] = {0};
    g.add_newborn(one);
    CHECK(g.degree(4) == 1);

    const VertexId dup[2] = {1, 1};
    CHECK_THROWS_AS(g.add_newborn(dup), std::invalid_argument);
    const VertexId out_of_range[2] = {0, 9};
    CHECK_THROWS_AS(g.add_newborn(out_of_range), std::invalid_argument);
    CHECK(g.vertex_count() == 5);  // failed calls leave no trace
    CHECK_THROWS_AS(g.add_edge(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 1), std::invalid_argument);
}

TEST_CASE("wheel minus arc") {
    CHECK_THROWS_AS(wheel_minus_arc(3), std::invalid_argument);
    CHECK(degrees_of(wheel_minus_arc(4)) == std::vector<std::uint32_t>{3, 2, 3, 2});
    CHECK(degrees_of(wheel_minus_arc(7)) == std::vector<std::uint32_t>{6, 2, 3, 3, 3, 3, 2});
    CHECK(wheel_minus_arc(5).degree_total() == 14);

    for (std::size_t t = 4; t <= 60; ++t) {
        for (auto center : {WheelCenter::FirstBorn, WheelCenter::SecondBorn}) {
            const Graph g = wheel_minus_arc(t, center);
            CHECK(g.degree_total() == 4 * t - 6);
            auto d = degrees_of(g);
            const VertexId hub = center == WheelCenter::FirstBorn ? 0 : 1;
            CHECK(d[hub] == t - 1);
            CHECK(g.has_edge(hub, static_cast<VertexId>(t - 1)));
            std::sort(d.begin(), d.end());
            std::vector<std::uint32_t> expected{2, 2};
            expected.insert(expected.end(), t - 3, 3);
            expected.push_back(static_cast<std::uint32_t>(t - 1));
            std::sort(expected.begin(), expected.end());
            CHECK(d == expected);
        }
    }
    // SecondBorn: vertex 0 is a rim end.
    CHECK(wheel_minus_arc(6, WheelCenter::SecondBorn).degree(0) == 2);
}

TEST_CASE("jaccard projection examples") {
    const Graph triangle = complete_graph(3);
    const auto pt = jaccard_projection(triangle);
    CHECK(pt.entries.size() == 3);
    for (const auto& e : pt.entries) {
        CHECK(e.shared == 1);
        CHECK(e.combined == 3);
    }
    CHECK(pt.weight(0, 2) == doctest::Approx(1.0 / 3));

    const Graph star = from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto ps = jaccard_projection(star);
    CHECK(ps.weight(1, 2) == 1.0);
    CHECK(ps.weight(2, 3) == 1.0);
    CHECK(ps.weight(0, 1) == 0.0);

    const Graph path = from_edges(3, {{0, 1}, {1, 2}});
    const auto pp = jaccard_projection(path);
    CHECK(pp.weight(0, 2) == 1.0);
    CHECK(pp.weight(2, 0) == 1.0);
    CHECK(pp.weight(0, 1) == 0.0);
    CHECK(pp.entries.size() == 1);

    CHECK_THROWS_AS(jaccard_projection(complete_graph(1)), std::invalid_argument);
}

TEST_CASE("jaccard projection matches neighbor sets") {
    const Graph g = generate({60, 3}, DesignSpec::draw_by_draw(11));
    const auto proj = jaccard_projection(g);
    for (VertexId i = 0; i < g.vertex_count(); ++i) {
        std::vector<VertexId> a(g.neighbors(i).begin(), g.neighbors(i).end());
        std::sort(a.begin(), a.end());
        for (VertexId j = i + 1; j < g.vertex_count(); ++j) {
            std::vector<VertexId> b(g.neighbors(j).begin(), g.neighbors(j).end());
            std::sort(b.begin(), b.end());
            std::vector<VertexId> both;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
            std::vector<VertexId> either;
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(either));
            const double w = either.empty() ? 0.0 : static_cast<double>(both.size()) / either.size();
            CHECK(proj.weight(i, j) == doctest::Approx(w));
            CHECK(proj.weight(j, i) == proj.weight(i, j));
            CHECK(proj.weight(i, j) >= 0.0);
            CHECK(proj.weight(i, j) <= 1.0);
            CHECK((proj.weight(i, j) == 1.0) == (!a.empty() && a == b));
        }
    }
    CHECK(std::is_sorted(proj.entries.begin(), proj.entries.end(), [](const auto& x, const auto& y) {
        return std::pair{x.i, x.j} < std::pair{y.i, y.j};
    }));
}

TEST_CASE("edge list and projection export") {
    Graph g = complete_graph(2);
    const VertexId both[2] = {0, 1};
    g.add_newborn(both);
    std::ostringstream edges;
    write_edge_list(edges, g);
    CHECK(edges.str() == "0 1\n0 2\n1 2\n");

    std::ostringstream csv;
    write_projection_csv(csv, jaccard_projection(g));
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "i,j,weight");
    std::getline(lines, line);
    CHECK(line.rfind("0,1,0.333333333333", 0) == 0);
    int rows = 1;
    while (std::getline(lines, line)) {
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("growth keeps the graph simple with the expected edge count") {
    for (std::size_t m = 1; m <= 4; ++m) {
        const Graph g = generate({200, m}, DesignSpec::chao(3));
        CHECK(g.vertex_count() == 200);
        CHECK(g.edge_count() == m * (m - 1) / 2 + (200 - m) * m);
        const auto d = g.degrees();
        CHECK(std::accumulate(d.begin(), d.end(), std::uint64_t{0}) == 2 * g.edge_count());
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            std::vector<VertexId> nb(g.neighbors(v).begin(), g.neighbors(v).end());
            CHECK(nb.size() == d[v]);
            std::sort(nb.begin(), nb.end());
            CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
            CHECK(!std::binary_search(nb.begin(), nb.end(), v));
        }
    }
}

}
