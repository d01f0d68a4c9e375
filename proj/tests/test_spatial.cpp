#include <cmath>

#include "doctest.h"
#include "ecx/errors.hpp"
#include "ecx/rng.hpp"
#include "ecx/spatial.hpp"
#include "ecx/synth.hpp"
#include "oracles.hpp"

using namespace ecx;

namespace {

std::vector<std::pair<int, int>> ordered_pairs(const RegionGraph& g) {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < static_cast<int>(g.regions().size()); ++r)
        for (int n : g.neighbors()[r]) out.push_back({r, n});
    return out;
}

}  // namespace

TEST_CASE("Moran's I is -1 on the 4-cycle chessboard") {
    const auto g = synth::gen_region_graph(synth::Cycle{4});
    std::map<std::string, double> v;
    const double vals[4] = {1.0, -1.0, 1.0, -1.0};
    for (int i = 0; i < 4; ++i) v[g.regions()[i]] = vals[i];
    // Hand evaluation: numerator -8, denominator 4, weight 4/8.
    CHECK(morans_i(v, g) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("Moran's I is +1 on two constant cliques with different means") {
    const auto g = synth::gen_region_graph(synth::TwoCliques{4});
    std::map<std::string, double> v;
    for (int i = 0; i < 8; ++i) v[g.regions()[i]] = i < 4 ? 2.0 : 5.0;
    CHECK(morans_i(v, g) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Moran's I agrees with the literal-formula oracle on random fields") {
    const auto g = synth::gen_region_graph(synth::Grid{5, 6});
    Rng rng(4);
    std::map<std::string, double> v;
    std::vector<double> x;
    for (const auto& r : g.regions()) {
        const double val = rng.normal();
        v[r] = val;
        x.push_back(val);
    }
    CHECK(morans_i(v, g) ==
          doctest::Approx(oracle::morans_i(x, ordered_pairs(g))).epsilon(1e-12));
}

TEST_CASE("Moran's I error paths") {
    const auto g = synth::gen_region_graph(synth::Cycle{4});
    std::map<std::string, double> constant;
    for (const auto& r : g.regions()) constant[r] = 3.0;
    CHECK_THROWS_WITH_AS(morans_i(constant, g), doctest::Contains("constant"), NumericalError);

    const auto isolated = RegionGraph::from_edges({}, {"A", "B"});
    std::map<std::string, double> v{{"A", 1.0}, {"B", 2.0}};
    CHECK_THROWS_WITH_AS(morans_i(v, isolated), doctest::Contains("no edges"), DataError);

    std::map<std::string, double> partial{{g.regions()[0], 1.0}};
    CHECK_THROWS_AS(morans_i(partial, g), DataError);
}

TEST_CASE("Moran's I is invariant under affine transforms of the field") {
    const auto g = synth::gen_region_graph(synth::Grid{4, 5});
    Rng rng(15);
    std::map<std::string, double> v, w;
    for (const auto& r : g.regions()) {
        v[r] = rng.normal();
        w[r] = -2.5 * v[r] + 7.0;
    }
    CHECK(morans_i(v, g) == doctest::Approx(morans_i(w, g)).epsilon(1e-9));
}

TEST_CASE("permutation null: mean of I approaches -1/(n-1)" *
          doctest::test_suite("montecarlo")) {
    const int rows = 10, cols = 10;
    const auto g = synth::gen_region_graph(synth::Grid{rows, cols});
    const int n = rows * cols;
    Rng rng(2024);
    std::vector<double> base(n);
    for (int i = 0; i < n; ++i) base[i] = rng.normal();

    const int n_perm = 2000;
    std::vector<double> stats_list;
    std::vector<double> field = base;
    for (int p = 0; p < n_perm; ++p) {
        rng.shuffle(field);
        std::map<std::string, double> v;
        for (int i = 0; i < n; ++i) v[g.regions()[i]] = field[i];
        stats_list.push_back(morans_i(v, g));
    }
    double mean = 0.0;
    for (double s : stats_list) mean += s / n_perm;
    double var = 0.0;
    for (double s : stats_list) var += (s - mean) * (s - mean) / (n_perm - 1);
    const double se = std::sqrt(var / n_perm);
    const double expected = -1.0 / (n - 1);
    CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("neighbor average: arithmetic mean with strict missingness") {
    const auto g = RegionGraph::from_edges({{"A", "B"}, {"A", "C"}, {"B", "C"}}, {"D"});
    std::map<std::string, double> v{{"A", 10.0}, {"B", 1.0}, {"C", 3.0}};

    const auto res = neighbor_average(v, g);
    CHECK(res.value.at("A") == doctest::Approx(2.0));  // mean of {1, 3}
    bool d_undefined = false;
    for (const auto& [region, reason] : res.undefined)
        if (region == "D" && reason == "no neighbors") d_undefined = true;
    CHECK(d_undefined);

    SUBCASE("missing neighbor value propagates to undefined") {
        std::map<std::string, double> partial{{"A", 10.0}, {"B", 1.0}};
        const auto res2 = neighbor_average(partial, g);
        CHECK(res2.value.count("A") == 0);  // C has no value
        CHECK(res2.value.at("C") == doctest::Approx(5.5));
    }
    SUBCASE("subset averaging mode averages over defined neighbors") {
        std::map<std::string, double> partial{{"A", 10.0}, {"B", 1.0}};
        const auto res2 = neighbor_average(partial, g, true);
        CHECK(res2.value.at("A") == doctest::Approx(1.0));
    }
}

TEST_CASE("neighbor average is linear") {
    const auto g = synth::gen_region_graph(synth::Grid{3, 4});
    Rng rng(77);
    std::map<std::string, double> x, y, combo;
    const double alpha = 1.7, beta = -0.4;
    for (const auto& r : g.regions()) {
        x[r] = rng.normal();
        y[r] = rng.normal();
        combo[r] = alpha * x[r] + beta * y[r];
    }
    const auto nx = neighbor_average(x, g);
    const auto ny = neighbor_average(y, g);
    const auto nc = neighbor_average(combo, g);
    for (const auto& [r, v] : nc.value)
        CHECK(v == doctest::Approx(alpha * nx.value.at(r) + beta * ny.value.at(r)).epsilon(1e-12));
}
