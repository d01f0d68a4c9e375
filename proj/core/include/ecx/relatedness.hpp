#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecx/types.hpp"

namespace ecx {

// Activity-activity proximity: minimum conditional co-specialization
// probability, phi_{ij} = C_{ij} / max(u_i, u_j). Symmetric, entries in
// [0,1], diagonal 1 for activities with ubiquity >= 1.
struct ProximityMatrix {
    std::vector<std::string> activities;
    int year = 0;
    Eigen::MatrixXd phi;
};

ProximityMatrix proximity(const SpecializationMatrix& m);

// Density omega_{r,i} = sum_{i'} M_{r,i'} phi_{i,i'} / sum_{i'} phi_{i,i'}.
// Activities with a zero phi row (ubiquity 0) have undefined density.
struct DensityMatrix {
    std::vector<std::string> regions;
    std::vector<std::string> activities;
    int year = 0;
    Eigen::MatrixXd omega;
    std::vector<std::uint8_t> activity_defined;  // 0 when sum_{i'} phi_{i,i'} == 0
};

DensityMatrix density(const SpecializationMatrix& m, const ProximityMatrix& phi);

// Per-region Pearson correlation between density and activity complexity over
// the activities the region is NOT yet specialized in. Regions with fewer
// than `min_candidates` candidate activities, or zero variance in either
// vector, come back undefined with a reason.
struct ClosenessResult {
    std::map<std::string, double> value;                              // defined regions only
    std::vector<std::pair<std::string, std::string>> undefined;      // (region, reason)
};

ClosenessResult closeness_to_complexity(const SpecializationMatrix& m, const DensityMatrix& omega,
                                        const std::map<std::string, double>& activity_complexity,
                                        int min_candidates = 3);

}  // namespace ecx
