#include "ecx/rca.hpp"

#include "ecx/errors.hpp"

namespace ecx {

RcaMatrix rca(const ActivityPanel& panel, const Baseline& baseline, int year) {
    if (!panel.year_index(year))
        throw DataError("rca: year " + std::to_string(year) + " not present in panel");
    const Eigen::MatrixXd X = panel.year_slice(year);
    const Eigen::Index nr = X.rows(), na = X.cols();
    const Eigen::VectorXd row_totals = X.rowwise().sum();

    Eigen::VectorXd z(na);
    if (baseline.mode == Baseline::Mode::internal) {
        const double grand = X.sum();
        if (grand <= 0.0)
            throw DataError("rca: zero grand total intensity in year " + std::to_string(year));
        z = X.colwise().sum().transpose() / grand;
    } else {
        for (Eigen::Index a = 0; a < na; ++a) {
            const bool active = X.col(a).sum() > 0.0;
            auto it = baseline.external_shares.find({panel.activities()[a], year});
            if (it == baseline.external_shares.end()) {
                if (active)
                    throw DataError("rca: external share missing for activity '" +
                                    panel.activities()[a] + "' in year " + std::to_string(year));
                z(a) = 0.0;
                continue;
            }
            if (!(it->second > 0.0 && it->second <= 1.0))
                throw DataError("rca: external share for activity '" + panel.activities()[a] +
                                "' in year " + std::to_string(year) + " must lie in (0,1]");
            z(a) = it->second;
        }
    }

    RcaMatrix out;
    out.regions = panel.regions();
    out.activities = panel.activities();
    out.year = year;
    out.values = Eigen::MatrixXd::Zero(nr, na);
    out.row_defined.assign(static_cast<std::size_t>(nr), 1);
    for (Eigen::Index r = 0; r < nr; ++r) {
        if (row_totals(r) <= 0.0) {
            out.row_defined[static_cast<std::size_t>(r)] = 0;
            continue;
        }
        for (Eigen::Index a = 0; a < na; ++a) {
            if (X(r, a) == 0.0) continue;  // z > 0 whenever intensity is positive
            out.values(r, a) = (X(r, a) / row_totals(r)) / z(a);
        }
    }
    return out;
}

SpecializationMatrix binarize(const RcaMatrix& rca_matrix, double threshold) {
    const Eigen::Index nr = rca_matrix.values.rows(), na = rca_matrix.values.cols();
    Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(nr, na);
    std::vector<std::uint8_t> no_data(static_cast<std::size_t>(nr), 0);
    for (Eigen::Index r = 0; r < nr; ++r) {
        if (!rca_matrix.row_defined[static_cast<std::size_t>(r)]) {
            no_data[static_cast<std::size_t>(r)] = 1;
            continue;
        }
        for (Eigen::Index a = 0; a < na; ++a)
            if (rca_matrix.values(r, a) > threshold) entries(r, a) = 1.0;
    }
    return SpecializationMatrix::from_entries(rca_matrix.regions, rca_matrix.activities,
                                              rca_matrix.year, std::move(entries),
                                              std::move(no_data));
}

}  // namespace ecx
