#include "ecx/relatedness.hpp"

#include <cmath>

#include "ecx/errors.hpp"
#include "ecx/stats.hpp"

namespace ecx {

ProximityMatrix proximity(const SpecializationMatrix& m) {
    m.validate();
    const Eigen::Index na = m.entries.cols();
    ProximityMatrix out;
    out.activities = m.activities;
    out.year = m.year;
    // C_{ij} = co-occurrence counts; min conditional probability equals
    // C / max(u_i, u_j), which needs no division guard on the smaller margin.
    const Eigen::MatrixXd C = m.entries.transpose() * m.entries;
    out.phi = Eigen::MatrixXd::Zero(na, na);
    for (Eigen::Index i = 0; i < na; ++i) {
        const double ui = m.ubiquity(i);
        if (ui == 0.0) continue;
        out.phi(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < na; ++j) {
            const double uj = m.ubiquity(j);
            if (uj == 0.0) continue;
            const double p = C(i, j) / std::max(ui, uj);
            out.phi(i, j) = p;
            out.phi(j, i) = p;
        }
    }
    return out;
}

DensityMatrix density(const SpecializationMatrix& m, const ProximityMatrix& phi) {
    if (phi.activities != m.activities)
        throw DataError("density: proximity matrix computed from a different activity set");
    const Eigen::Index nr = m.entries.rows(), na = m.entries.cols();
    DensityMatrix out;
    out.regions = m.regions;
    out.activities = m.activities;
    out.year = m.year;
    out.omega = Eigen::MatrixXd::Zero(nr, na);
    out.activity_defined.assign(static_cast<std::size_t>(na), 1);
    const Eigen::VectorXd phi_sums = phi.phi.rowwise().sum();
    const Eigen::MatrixXd numer = m.entries * phi.phi;  // (r,i) = sum_{i'} M_{r,i'} phi_{i',i}
    for (Eigen::Index i = 0; i < na; ++i) {
        if (phi_sums(i) == 0.0) {
            out.activity_defined[static_cast<std::size_t>(i)] = 0;
            continue;
        }
        out.omega.col(i) = numer.col(i) / phi_sums(i);
        // The numerator is a sub-sum of the denominator, so omega lies in
        // [0,1] exactly; summation order can overshoot by an ulp.
        for (Eigen::Index r = 0; r < nr; ++r) {
            double& v = out.omega(r, i);
            if (v > 1.0 && v < 1.0 + 1e-9) v = 1.0;
            if (v < 0.0 && v > -1e-9) v = 0.0;
        }
    }
    return out;
}

ClosenessResult closeness_to_complexity(const SpecializationMatrix& m, const DensityMatrix& omega,
                                        const std::map<std::string, double>& activity_complexity,
                                        int min_candidates) {
    if (omega.activities != m.activities || omega.regions != m.regions)
        throw DataError("closeness: density matrix computed from a different matrix");
    ClosenessResult out;
    const Eigen::Index nr = m.entries.rows(), na = m.entries.cols();

    // Complexity is only needed for candidate activities (not yet
    // specialized, with defined density); look it up lazily so zero-ubiquity
    // activities outside the scored system never require a score.
    std::vector<double> complexity(static_cast<std::size_t>(na), 0.0);
    std::vector<std::uint8_t> have(static_cast<std::size_t>(na), 0);
    for (Eigen::Index a = 0; a < na; ++a) {
        auto it = activity_complexity.find(m.activities[static_cast<std::size_t>(a)]);
        if (it != activity_complexity.end()) {
            complexity[static_cast<std::size_t>(a)] = it->second;
            have[static_cast<std::size_t>(a)] = 1;
        }
    }

    for (Eigen::Index r = 0; r < nr; ++r) {
        const std::string& region = m.regions[static_cast<std::size_t>(r)];
        std::vector<double> w, c;
        for (Eigen::Index a = 0; a < na; ++a) {
            if (m.entries(r, a) != 0.0) continue;  // only not-yet-specialized activities
            if (!omega.activity_defined[static_cast<std::size_t>(a)]) continue;
            if (!have[static_cast<std::size_t>(a)])
                throw DataError("closeness: complexity missing for activity '" +
                                m.activities[static_cast<std::size_t>(a)] + "'");
            w.push_back(omega.omega(r, a));
            c.push_back(complexity[static_cast<std::size_t>(a)]);
        }
        if (static_cast<int>(w.size()) < min_candidates) {
            out.undefined.push_back({region, "fewer than " + std::to_string(min_candidates) +
                                                 " candidate activities"});
            continue;
        }
        try {
            out.value[region] = stats::pearson(w, c);
        } catch (const NumericalError&) {
            out.undefined.push_back({region, "zero variance"});
        }
    }
    return out;
}

}  // namespace ecx
