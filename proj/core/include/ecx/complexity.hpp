#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "ecx/types.hpp"

namespace ecx {

// Scores for one year. region_scores/activity_scores are standardized to
// mean 0, population std 1 over the included entities; raw_* hold the
// pre-standardization eigenvector components (sign already fixed so that
// corr(K, diversity) >= 0). Dropped entities carry no score.
struct ComplexityResult {
    int year = 0;
    std::map<std::string, double> region_scores;
    std::map<std::string, double> activity_scores;
    std::map<std::string, double> raw_region;
    std::map<std::string, double> raw_activity;
    std::vector<std::pair<std::string, std::string>> dropped_regions;     // (id, reason)
    std::vector<std::pair<std::string, std::string>> dropped_activities;  // (id, reason)
};

// Iteratively removes zero-diversity regions and zero-ubiquity activities,
// then restricts to the largest connected component of the region-activity
// bipartite graph (largest by region count, ties by entry count).
struct PruneResult {
    SpecializationMatrix matrix;
    std::vector<std::pair<std::string, std::string>> dropped_regions;
    std::vector<std::pair<std::string, std::string>> dropped_activities;
};
PruneResult prune_to_core(const SpecializationMatrix& m);

// ECI_r = (1/M_{r,*}) sum_i M_{r,i} PCI_i over regions with diversity >= 1,
// standardized over the included regions. pci keys are activity ids; a
// missing pci for a needed activity throws DataError naming it.
ComplexityResult eci_from_external(const SpecializationMatrix& m,
                                   const std::map<std::string, double>& pci);

// Mhat_{r,r'} = sum_i M_{r,i} M_{r',i} / (M_{r,*} M_{*,i}); row-stochastic.
// Throws NumericalError "prune required" when a zero marginal is present.
Eigen::MatrixXd build_mhat(const SpecializationMatrix& m);

enum class EigenMethod {
    automatic,  // dense below 2000 regions, power iteration above
    dense,
    power,
};

// Region and activity complexity from the spectral solution of the K/Q
// recursion: K is the eigenvector of Mhat for the second-largest eigenvalue
// (the largest is 1 with a constant eigenvector), Q is the specialization-
// weighted activity average of K. Prunes and restricts to the largest
// connected component internally. Throws NumericalError "degenerate system"
// when fewer than 3 regions or activities survive pruning or when the second
// eigenvalue is not separated, and "complex spectrum" when the top
// eigenvalues are not real within 1e-8.
ComplexityResult eigen_complexity(const SpecializationMatrix& m,
                                  EigenMethod method = EigenMethod::automatic);

// Method-of-reflections iteration, used as an independent cross-check of the
// eigenvector solution. Requires a pruned, connected matrix. Iteration 0 is
// standardized diversity/ubiquity; each subsequent iteration averages the
// other side's previous vector over specializations and re-standardizes.
struct ReflectionsResult {
    std::vector<std::string> regions;
    std::vector<std::string> activities;
    std::vector<Eigen::VectorXd> region_iterates;    // [0..iterations]
    std::vector<Eigen::VectorXd> activity_iterates;  // [0..iterations]
};
ReflectionsResult reflections(const SpecializationMatrix& m, int iterations);

}  // namespace ecx
