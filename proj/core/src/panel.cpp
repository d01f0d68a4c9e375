#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ecx/econometrics.hpp"
#include "ecx/errors.hpp"
#include "ecx/stats.hpp"

namespace ecx {

const Coefficient* PanelModelResult::find(const std::string& name) const {
    for (const auto& c : coefficients)
        if (c.name == name) return &c;
    return nullptr;
}

IndicatorSeries growth_rate(const IndicatorSeries& y, int horizon) {
    if (horizon < 1) throw DataError("growth_rate: horizon must be >= 1");
    IndicatorSeries g("g_h" + std::to_string(horizon), "log/year");
    for (const auto& [key, v] : y.values()) {
        if (v <= 0.0)
            throw DataError("growth_rate: nonpositive value at (" + key.first + ", " +
                            std::to_string(key.second) + ")");
        const auto ahead = y.get(key.first, key.second + horizon);
        if (!ahead) continue;
        if (*ahead <= 0.0)
            throw DataError("growth_rate: nonpositive value at (" + key.first + ", " +
                            std::to_string(key.second + horizon) + ")");
        g.set(key.first, key.second, (std::log(*ahead) - std::log(v)) / horizon);
    }
    return g;
}

RegressionTable build_panel(const std::vector<const IndicatorSeries*>& series,
                            const PanelSpec& spec) {
    auto lookup = [&](const std::string& name) -> const IndicatorSeries* {
        for (const auto* s : series)
            if (s->name() == name) return s;
        throw DataError("build_panel: indicator '" + name + "' not found");
    };
    const IndicatorSeries* dep = lookup(spec.dependent);
    std::vector<const IndicatorSeries*> regs;
    regs.reserve(spec.regressors.size());
    for (const auto& r : spec.regressors) regs.push_back(lookup(r));
    std::set<std::string> logged(spec.log_transform.begin(), spec.log_transform.end());
    for (const auto& name : logged)
        if (std::find(spec.regressors.begin(), spec.regressors.end(), name) ==
            spec.regressors.end())
            throw DataError("build_panel: log_transform name '" + name + "' is not a regressor");

    RegressionTable t;
    t.has_lagged_dependent = spec.include_lagged_dependent;
    t.lag_step = spec.lag_step();
    t.columns.push_back(spec.dependent);
    if (spec.include_lagged_dependent) t.columns.push_back(spec.dependent + "_lag");
    for (const auto& r : spec.regressors)
        t.columns.push_back(logged.count(r) ? "log_" + r : r);

    std::vector<std::vector<double>> rows;
    for (const auto& [key, gval] : dep->values()) {
        const auto& [region, year] = key;
        std::vector<double> row;
        row.push_back(gval);
        std::string missing;
        if (spec.include_lagged_dependent) {
            const auto lag = dep->get(region, year - t.lag_step);
            if (!lag)
                missing = spec.dependent + "_lag";
            else
                row.push_back(*lag);
        }
        if (missing.empty()) {
            for (std::size_t j = 0; j < regs.size(); ++j) {
                const auto v = regs[j]->get(region, year);
                if (!v) {
                    missing = spec.regressors[j];
                    break;
                }
                if (logged.count(spec.regressors[j])) {
                    if (*v <= 0.0)
                        throw DataError("build_panel: nonpositive value of '" +
                                        spec.regressors[j] + "' at (" + region + ", " +
                                        std::to_string(year) + ") cannot be log-transformed");
                    row.push_back(std::log(*v));
                } else {
                    row.push_back(*v);
                }
            }
        }
        if (!missing.empty()) {
            t.deletion_log.push_back({region, year, missing});
            continue;
        }
        t.region.push_back(region);
        t.year.push_back(year);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("build_panel: empty panel after listwise deletion");
    t.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(t.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return t;
}

namespace {

// Pivoted-QR OLS with rank reporting.
struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd resid;
    std::vector<int> dropped_columns;  // indices beyond numerical rank
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    OlsFit fit;
    const auto rank = qr.rank();
    if (rank < X.cols()) {
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index j = rank; j < X.cols(); ++j)
            fit.dropped_columns.push_back(perm(j));
        std::sort(fit.dropped_columns.begin(), fit.dropped_columns.end());
    }
    fit.beta = qr.solve(y);
    fit.resid = y - X * fit.beta;
    return fit;
}

}  // namespace

PanelModelResult within_fe(const RegressionTable& table, const PanelSpec& spec) {
    const Eigen::Index n_all = table.n_rows();
    if (n_all == 0) throw DataError("within_fe: empty table");

    // Keep regions with at least two observations; singletons are absorbed
    // entirely by their fixed effect.
    std::map<std::string, int> region_count;
    for (const auto& r : table.region) ++region_count[r];
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n_all; ++i)
        if (region_count[table.region[i]] >= 2) keep.push_back(i);
    if (keep.size() < 4) throw DataError("within_fe: too few observations");

    const Eigen::Index n = static_cast<Eigen::Index>(keep.size());
    const Eigen::Index k = static_cast<Eigen::Index>(table.columns.size()) - 1;
    if (k < 1) throw DataError("within_fe: no regressors");

    std::map<std::string, int> region_ids;
    std::map<int, int> year_ids;
    std::vector<int> row_region(n), row_year(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto src = keep[i];
        row_region[i] =
            region_ids.emplace(table.region[src], static_cast<int>(region_ids.size()))
                .first->second;
        row_year[i] =
            year_ids.emplace(table.year[src], static_cast<int>(year_ids.size())).first->second;
    }

    // Column 0 is the dependent; everything else is a regressor.
    Eigen::MatrixXd data(n, k + 1);
    for (Eigen::Index i = 0; i < n; ++i) data.row(i) = table.values.row(keep[i]);

    // Alternating region/year demeaning (exact for balanced panels, iterated
    // to convergence for unbalanced ones).
    const int n_regions = static_cast<int>(region_ids.size());
    const int n_years = static_cast<int>(year_ids.size());
    std::vector<double> rsum(n_regions), ysum(n_years);
    std::vector<int> rcount(n_regions, 0), ycount(n_years, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        ++rcount[row_region[i]];
        ++ycount[row_year[i]];
    }
    for (Eigen::Index c = 0; c <= k; ++c) {
        for (int iter = 0; iter < 2000; ++iter) {
            double shift = 0.0;
            if (spec.region_effects) {
                std::fill(rsum.begin(), rsum.end(), 0.0);
                for (Eigen::Index i = 0; i < n; ++i) rsum[row_region[i]] += data(i, c);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double m = rsum[row_region[i]] / rcount[row_region[i]];
                    data(i, c) -= m;
                    shift = std::max(shift, std::abs(m));
                }
            }
            if (spec.year_effects) {
                std::fill(ysum.begin(), ysum.end(), 0.0);
                for (Eigen::Index i = 0; i < n; ++i) ysum[row_year[i]] += data(i, c);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double m = ysum[row_year[i]] / ycount[row_year[i]];
                    data(i, c) -= m;
                    shift = std::max(shift, std::abs(m));
                }
            }
            if (shift < 1e-12 || (!spec.region_effects && !spec.year_effects)) break;
        }
    }

    const Eigen::VectorXd y = data.col(0);
    const Eigen::MatrixXd X = data.rightCols(k);
    OlsFit fit = ols(X, y);
    if (!fit.dropped_columns.empty()) {
        std::string msg = "within_fe: collinear columns after within transformation:";
        for (int j : fit.dropped_columns) msg += " " + table.columns[j + 1];
        throw NumericalError(msg);
    }

    // Cluster-robust (by region) sandwich.
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    std::vector<Eigen::VectorXd> cluster_score(n_regions, Eigen::VectorXd::Zero(k));
    for (Eigen::Index i = 0; i < n; ++i)
        cluster_score[row_region[i]] += X.row(i).transpose() * fit.resid(i);
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    for (const auto& s : cluster_score) meat += s * s.transpose();
    const double G = n_regions;
    const double c = (G / (G - 1.0)) * ((n - 1.0) / static_cast<double>(n - k));
    const Eigen::MatrixXd V = c * xtx_inv * meat * xtx_inv;

    PanelModelResult out;
    out.estimator = Estimator::within_fe;
    out.n_obs = static_cast<int>(n);
    out.n_regions = n_regions;
    for (Eigen::Index j = 0; j < k; ++j)
        out.coefficients.push_back(
            {table.columns[j + 1], fit.beta(j), std::sqrt(std::max(0.0, V(j, j)))});
    return out;
}

std::map<std::string, double> vif(const RegressionTable& table,
                                  const std::vector<std::string>& regressors) {
    if (regressors.size() < 2) throw DataError("vif: need at least 2 regressors");
    std::vector<Eigen::Index> cols;
    for (const auto& name : regressors) {
        const auto it = std::find(table.columns.begin(), table.columns.end(), name);
        if (it == table.columns.end()) throw DataError("vif: column '" + name + "' not in table");
        cols.push_back(std::distance(table.columns.begin(), it));
    }
    const Eigen::Index n = table.n_rows();
    std::map<std::string, double> out;
    for (std::size_t kidx = 0; kidx < cols.size(); ++kidx) {
        Eigen::VectorXd y = table.values.col(cols[kidx]);
        Eigen::MatrixXd X(n, cols.size());  // intercept + the other regressors
        X.col(0).setOnes();
        Eigen::Index j = 1;
        for (std::size_t m = 0; m < cols.size(); ++m) {
            if (m == kidx) continue;
            X.col(j++) = table.values.col(cols[m]);
        }
        const OlsFit fit = ols(X, y);
        const double ybar = y.mean();
        const double tss = (y.array() - ybar).square().sum();
        if (tss <= 0.0) {
            out[regressors[kidx]] = std::numeric_limits<double>::infinity();
            continue;
        }
        const double rss = fit.resid.squaredNorm();
        const double r2 = 1.0 - rss / tss;
        if (r2 >= 1.0 - 1e-12)
            out[regressors[kidx]] = std::numeric_limits<double>::infinity();
        else
            out[regressors[kidx]] = 1.0 / (1.0 - r2);
    }
    return out;
}

}  // namespace ecx
