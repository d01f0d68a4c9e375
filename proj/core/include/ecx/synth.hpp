#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "ecx/types.hpp"

namespace ecx::synth {

// All generators are pure functions of (parameters, seed); the random source
// is the project-wide Rng (mt19937_64 + Box-Muller, see ecx/rng.hpp).

struct Nested {};
struct Random {
    double density = 0.3;
};
struct Block {
    int blocks = 2;
};
using SpecializationModel = std::variant<Nested, Random, Block>;

// nested: region r specialized in the first ceil(n_act*(n_reg-r)/n_reg)
// activities, a strictly triangular diversity profile with no pruning loss.
// random: iid Bernoulli(density) entries, row-major draw order.
// block: k disjoint nested blocks, so the bipartite graph has exactly k
// connected components.
SpecializationMatrix gen_specialization(int n_regions, int n_activities,
                                        const SpecializationModel& model, std::uint64_t seed,
                                        int year = 2000);

struct Cycle {
    int n = 4;
};
struct Grid {
    int rows = 2;
    int cols = 2;
};
struct TwoCliques {
    int clique_size = 3;
};
using GraphModel = std::variant<Cycle, Grid, TwoCliques>;

// Structured graphs for exact spatial-statistic checks; deterministic, the
// seed is accepted for interface uniformity and ignored.
RegionGraph gen_region_graph(const GraphModel& model, std::uint64_t seed = 0);

// Dynamic panel y_it = rho*y_{i,t-1} + beta*x_it + mu_i + eps_it with a
// 50-period burn-in. x is predetermined-style: persistent and correlated
// with mu_i at strength x_mu_weight. Optional AR(1) structure in eps drives
// the Arellano-Bond power designs.
struct DynamicPanelSpec {
    int n_regions = 100;
    int n_periods = 8;
    double rho = 0.5;
    double beta = 1.0;
    double sigma_mu = 1.0;
    double sigma_eps = 1.0;
    double ar_eps = 0.0;
    double x_rho = 0.5;
    double x_mu_weight = 0.3;
    double sigma_x = 1.0;
    int first_year = 2001;
    std::uint64_t seed = 1;
};

struct DynamicPanelData {
    IndicatorSeries y;                  // named "y"
    IndicatorSeries x;                  // named "x"
    std::map<std::string, double> mu;   // true region effects, for oracles
};

DynamicPanelData gen_dynamic_panel(const DynamicPanelSpec& spec);

// Zero-padded identifiers R0001.., A0001.. shared by all generators.
std::string region_id(int index, int count);
std::string activity_id(int index, int count);

}  // namespace ecx::synth
