#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecx/types.hpp"

namespace ecx {

// Baseline expectation Z_i for the relative intensity of an activity.
// internal: national activity share computed from the panel itself (industry
// data). external: user-supplied shares, e.g. a product's share in world
// trade (export data).
struct Baseline {
    enum class Mode { internal, external };
    Mode mode = Mode::internal;
    std::map<std::pair<std::string, int>, double> external_shares;  // (activity, year) -> share

    static Baseline internal() { return {}; }
    static Baseline external(std::map<std::pair<std::string, int>, double> shares) {
        return {Mode::external, std::move(shares)};
    }
};

// Region x activity RCA values for one year. Rows for regions with zero total
// intensity are undefined (0/0), kept distinct from zero.
struct RcaMatrix {
    std::vector<std::string> regions;
    std::vector<std::string> activities;
    int year = 0;
    Eigen::MatrixXd values;
    std::vector<std::uint8_t> row_defined;  // 0 when the region had no intensity that year
};

// RCA_{r,i} = (X_{r,i} / sum_j X_{r,j}) / Z_i. Throws DataError when the year
// is absent, when the grand total is zero (internal mode), or when an external
// share is missing for an activity with positive intensity.
RcaMatrix rca(const ActivityPanel& panel, const Baseline& baseline, int year);

// entry = 1 iff RCA strictly exceeds `threshold`; undefined rows become
// all-zero rows flagged no_data.
SpecializationMatrix binarize(const RcaMatrix& rca_matrix, double threshold = 1.0);

}  // namespace ecx
