#pragma once

#include <map>
#include <string>
#include <vector>

#include "ecx/types.hpp"

namespace ecx {

// Global spatial autocorrelation with binary adjacency weights and the
// global normalization factor ||R|| / sum_r ||N(r)||:
//   I = (||R||/sum_r||N(r)||) *
//       sum_r sum_{r' in N(r)} (x_{r'}-xbar)(x_r-xbar) / sum_r (x_r-xbar)^2
// Values must cover every graph region. Throws NumericalError for a constant
// field and DataError for a graph without edges or incomplete values.
double morans_i(const std::map<std::string, double>& values, const RegionGraph& graph);

// Average of neighbors' values. Regions with no neighbors or with any
// neighbor missing a value are undefined and reported with a reason; a
// subset-averaging mode is available behind `average_defined_subset`.
struct NeighborAverageResult {
    std::map<std::string, double> value;
    std::vector<std::pair<std::string, std::string>> undefined;  // (region, reason)
};

NeighborAverageResult neighbor_average(const std::map<std::string, double>& values,
                                       const RegionGraph& graph,
                                       bool average_defined_subset = false);

}  // namespace ecx
