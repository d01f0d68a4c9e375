#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "ecx/econometrics.hpp"
#include "ecx/errors.hpp"
#include "ecx/stats.hpp"

namespace ecx {

namespace {

// PSD inversion via the spectral decomposition; throws when the matrix is
// numerically singular.
Eigen::MatrixXd invert_psd(const Eigen::MatrixXd& S, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw NumericalError(std::string(what) + ": decomposition failed");
    const auto& ev = es.eigenvalues();
    const double max_ev = ev.cwiseAbs().maxCoeff();
    if (max_ev <= 0.0 || ev.minCoeff() <= 1e-12 * max_ev)
        throw NumericalError(std::string("singular ") + what);
    return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

struct RegionRows {
    std::string region;
    std::map<int, Eigen::Index> row_by_year;
};

}  // namespace

GmmFit system_gmm_fit(const RegressionTable& table, const PanelSpec& spec,
                      const GmmOptions& options) {
    if (!spec.include_lagged_dependent || !table.has_lagged_dependent)
        throw DataError("system_gmm: model requires the lagged dependent variable");
    if (options.max_lag_depth < 2)
        throw DataError("system_gmm: max_lag_depth must be at least 2");
    const int L = table.lag_step;
    const Eigen::Index n_rows = table.n_rows();
    if (n_rows == 0) throw DataError("system_gmm: empty table");

    // Group rows per region; rows arrive sorted by (region, year).
    std::vector<RegionRows> groups;
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        if (groups.empty() || groups.back().region != table.region[i])
            groups.push_back({table.region[i], {}});
        groups.back().row_by_year[table.year[i]] = i;
    }

    std::set<int> all_years;
    for (Eigen::Index i = 0; i < n_rows; ++i) all_years.insert(table.year[i]);
    if (static_cast<int>(all_years.size()) < 4)
        throw DataError("system_gmm: fewer than 4 usable periods");

    // Parameter layout: lagged dependent, regressors, year dummies (first
    // usable year dropped), constant.
    const int p = static_cast<int>(table.columns.size()) - 2;  // plain regressors
    std::vector<int> dummy_years;
    if (spec.year_effects)
        for (auto it = std::next(all_years.begin()); it != all_years.end(); ++it)
            dummy_years.push_back(*it);
    const int k = 1 + p + static_cast<int>(dummy_years.size()) + 1;

    std::vector<std::string> param_names;
    param_names.push_back(table.columns[1]);
    for (int j = 0; j < p; ++j) param_names.push_back(table.columns[2 + j]);
    for (int y : dummy_years) param_names.push_back("year_" + std::to_string(y));
    param_names.push_back("const");

    // Instrument layout. GMM-style blocks are zero-filled where a lag is
    // unavailable; collapsing keeps one column per lag depth.
    std::vector<int> diff_year_list, level_year_list;
    {
        std::set<int> dyears;
        for (const auto& g : groups)
            for (const auto& [t, row] : g.row_by_year)
                if (g.row_by_year.count(t - L)) dyears.insert(t);
        diff_year_list.assign(dyears.begin(), dyears.end());
        level_year_list.assign(all_years.begin(), all_years.end());
    }
    const int dep_lags = options.max_lag_depth - 1;  // lags 2..max_lag_depth
    const int reg_lags = options.predetermined_max_lag;

    int n_dep_diff_cols, n_reg_diff_cols, n_dep_level_cols, n_reg_level_cols;
    if (options.collapse_instruments) {
        n_dep_diff_cols = dep_lags;
        n_reg_diff_cols = p * reg_lags;
        n_dep_level_cols = 1;
        n_reg_level_cols = p;
    } else {
        n_dep_diff_cols = dep_lags * static_cast<int>(diff_year_list.size());
        n_reg_diff_cols = p * reg_lags * static_cast<int>(diff_year_list.size());
        n_dep_level_cols = static_cast<int>(level_year_list.size());
        n_reg_level_cols = p * static_cast<int>(level_year_list.size());
    }
    const int n_exo = static_cast<int>(dummy_years.size()) + 1;
    const int n_inst =
        n_dep_diff_cols + n_reg_diff_cols + n_dep_level_cols + n_reg_level_cols + n_exo;

    const int n_regions = static_cast<int>(groups.size());
    auto diff_year_col = [&](int t) {
        return static_cast<int>(std::lower_bound(diff_year_list.begin(), diff_year_list.end(), t) -
                                diff_year_list.begin());
    };
    auto level_year_col = [&](int t) {
        return static_cast<int>(
            std::lower_bound(level_year_list.begin(), level_year_list.end(), t) -
            level_year_list.begin());
    };

    GmmFit fit;
    fit.param_names = param_names;
    fit.n_regions = n_regions;
    fit.n_params = k;
    fit.lag_step = L;

    std::vector<Eigen::MatrixXd> H_blocks;

    for (const auto& g : groups) {
        // Dependent-variable levels by year, recovered from both the
        // dependent column and the lagged-dependent column.
        std::map<int, double> dep_level;
        std::map<int, std::map<int, double>> reg_level;  // regressor j -> year -> value
        for (const auto& [t, row] : g.row_by_year) {
            dep_level[t] = table.values(row, 0);
            dep_level.emplace(t - L, table.values(row, 1));
            for (int j = 0; j < p; ++j) reg_level[j][t] = table.values(row, 2 + j);
        }

        std::vector<int> dyears, lyears;
        for (const auto& [t, row] : g.row_by_year) {
            lyears.push_back(t);
            if (g.row_by_year.count(t - L)) dyears.push_back(t);
        }
        const int nd = static_cast<int>(dyears.size());
        const int nl = static_cast<int>(lyears.size());

        GmmFit::Block blk;
        blk.diff_years = dyears;
        blk.level_years = lyears;
        blk.Z = Eigen::MatrixXd::Zero(nd + nl, n_inst);
        blk.X = Eigen::MatrixXd::Zero(nd + nl, k);
        blk.y = Eigen::VectorXd::Zero(nd + nl);

        auto dummy_index = [&](int t) -> int {
            for (std::size_t d = 0; d < dummy_years.size(); ++d)
                if (dummy_years[d] == t) return static_cast<int>(d);
            return -1;
        };

        for (int a = 0; a < nd; ++a) {
            const int t = dyears[a];
            const Eigen::Index r1 = g.row_by_year.at(t);
            const Eigen::Index r0 = g.row_by_year.at(t - L);
            blk.y(a) = table.values(r1, 0) - table.values(r0, 0);
            blk.X(a, 0) = table.values(r1, 1) - table.values(r0, 1);
            for (int j = 0; j < p; ++j)
                blk.X(a, 1 + j) = table.values(r1, 2 + j) - table.values(r0, 2 + j);
            const int d1 = dummy_index(t), d0 = dummy_index(t - L);
            if (d1 >= 0) blk.X(a, 1 + p + d1) += 1.0;
            if (d0 >= 0) blk.X(a, 1 + p + d0) -= 1.0;
            // constant differences out

            int col = 0;
            for (int lag = 2; lag <= options.max_lag_depth; ++lag) {
                auto it = dep_level.find(t - lag * L);
                const double v = it != dep_level.end() ? it->second : 0.0;
                if (options.collapse_instruments) {
                    blk.Z(a, col + (lag - 2)) = v;
                } else {
                    blk.Z(a, col + (lag - 2) * static_cast<int>(diff_year_list.size()) +
                                 diff_year_col(t)) = v;
                }
            }
            col += n_dep_diff_cols;
            for (int j = 0; j < p; ++j) {
                for (int lag = 1; lag <= reg_lags; ++lag) {
                    auto it = reg_level[j].find(t - lag * L);
                    const double v = it != reg_level[j].end() ? it->second : 0.0;
                    const int base = col + j * reg_lags + (lag - 1);
                    if (options.collapse_instruments) {
                        blk.Z(a, base) = v;
                    } else {
                        blk.Z(a, col + (j * reg_lags + (lag - 1)) *
                                          static_cast<int>(diff_year_list.size()) +
                                     diff_year_col(t)) = v;
                    }
                }
            }
            col += n_reg_diff_cols + n_dep_level_cols + n_reg_level_cols;
            if (d1 >= 0) blk.Z(a, col + d1) += 1.0;
            if (d0 >= 0) blk.Z(a, col + d0) -= 1.0;
            // constant instrument is zero in differences
        }

        for (int a = 0; a < nl; ++a) {
            const int t = lyears[a];
            const Eigen::Index r = g.row_by_year.at(t);
            const int out = nd + a;
            blk.y(out) = table.values(r, 0);
            blk.X(out, 0) = table.values(r, 1);
            for (int j = 0; j < p; ++j) blk.X(out, 1 + j) = table.values(r, 2 + j);
            const int d = dummy_index(t);
            if (d >= 0) blk.X(out, 1 + p + d) = 1.0;
            blk.X(out, k - 1) = 1.0;

            int col = n_dep_diff_cols + n_reg_diff_cols;
            // Lagged difference of the dependent instruments the level
            // equation: dep(t-L) - dep(t-2L).
            auto i1 = dep_level.find(t - L);
            auto i2 = dep_level.find(t - 2 * L);
            if (i1 != dep_level.end() && i2 != dep_level.end()) {
                const double v = i1->second - i2->second;
                if (options.collapse_instruments)
                    blk.Z(out, col) = v;
                else
                    blk.Z(out, col + level_year_col(t)) = v;
            }
            col += n_dep_level_cols;
            for (int j = 0; j < p; ++j) {
                auto x1 = reg_level[j].find(t);
                auto x0 = reg_level[j].find(t - L);
                if (x1 != reg_level[j].end() && x0 != reg_level[j].end()) {
                    const double v = x1->second - x0->second;
                    if (options.collapse_instruments)
                        blk.Z(out, col + j) = v;
                    else
                        blk.Z(out, col + j * static_cast<int>(level_year_list.size()) +
                                       level_year_col(t)) = v;
                }
            }
            col += n_reg_level_cols;
            if (d >= 0) blk.Z(out, col + d) = 1.0;
            blk.Z(out, n_inst - 1) = 1.0;
        }

        // One-step H: covariance of (differenced, level) errors under
        // homoskedastic iid, up to scale.
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nd + nl, nd + nl);
        for (int a = 0; a < nd; ++a) {
            H(a, a) = 2.0;
            for (int c = a + 1; c < nd; ++c)
                if (std::abs(dyears[a] - dyears[c]) == L) {
                    H(a, c) = -1.0;
                    H(c, a) = -1.0;
                }
        }
        for (int a = 0; a < nl; ++a) H(nd + a, nd + a) = 1.0;
        for (int a = 0; a < nd; ++a)
            for (int c = 0; c < nl; ++c) {
                if (lyears[c] == dyears[a]) {
                    H(a, nd + c) = 1.0;
                    H(nd + c, a) = 1.0;
                } else if (lyears[c] == dyears[a] - L) {
                    H(a, nd + c) = -1.0;
                    H(nd + c, a) = -1.0;
                }
            }

        H_blocks.push_back(std::move(H));
        fit.n_obs_diff += nd;
        fit.n_obs_level += nl;
        fit.blocks.push_back(std::move(blk));
    }

    if (fit.n_obs_diff == 0) throw DataError("system_gmm: no usable difference observations");

    // Drop instrument columns that are identically zero (lags deeper than the
    // data reach); they carry no moment and would make the weighting matrix
    // singular.
    Eigen::VectorXd col_norm = Eigen::VectorXd::Zero(n_inst);
    for (const auto& blk : fit.blocks) col_norm += blk.Z.cwiseAbs().colwise().sum().transpose();
    std::vector<int> keep_cols;
    for (int c = 0; c < n_inst; ++c)
        if (col_norm(c) > 0.0) keep_cols.push_back(c);
    if (static_cast<int>(keep_cols.size()) < n_inst) {
        for (auto& blk : fit.blocks) {
            Eigen::MatrixXd z(blk.Z.rows(), keep_cols.size());
            for (std::size_t c = 0; c < keep_cols.size(); ++c) z.col(c) = blk.Z.col(keep_cols[c]);
            blk.Z = std::move(z);
        }
    }
    // Redundant instruments (e.g. a lag column that is an exact linear
    // combination of the exogenous columns) make the weighting matrix
    // singular; drop them one at a time, guided by the null eigenvector,
    // keeping the earliest columns.
    {
        auto build_zhz = [&]() {
            Eigen::MatrixXd zhz =
                Eigen::MatrixXd::Zero(fit.blocks[0].Z.cols(), fit.blocks[0].Z.cols());
            for (std::size_t i = 0; i < fit.blocks.size(); ++i)
                zhz.noalias() += fit.blocks[i].Z.transpose() * H_blocks[i] * fit.blocks[i].Z;
            return zhz;
        };
        Eigen::MatrixXd zhz = build_zhz();
        while (zhz.cols() > 0) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(zhz);
            const double max_ev = es.eigenvalues().cwiseAbs().maxCoeff();
            if (max_ev > 0.0 && es.eigenvalues().minCoeff() > 1e-11 * max_ev) break;
            // Drop the earliest column involved in the dependency; GMM-style
            // lag columns precede the exogenous block, which stays intact.
            const Eigen::VectorXd weights = es.eigenvectors().col(0).cwiseAbs();
            const double top = weights.maxCoeff();
            Eigen::Index drop = 0;
            while (drop + 1 < weights.size() && weights(drop) < 0.1 * top) ++drop;
            for (auto& blk : fit.blocks) {
                Eigen::MatrixXd z(blk.Z.rows(), blk.Z.cols() - 1);
                z.leftCols(drop) = blk.Z.leftCols(drop);
                z.rightCols(z.cols() - drop) = blk.Z.rightCols(blk.Z.cols() - drop - 1);
                blk.Z = std::move(z);
            }
            zhz = build_zhz();
        }
    }

    const int n_live = static_cast<int>(fit.blocks[0].Z.cols());
    fit.n_instruments = n_live;
    if (n_live >= n_regions)
        throw NumericalError(
            "instrument proliferation: " + std::to_string(n_live) + " instruments for " +
            std::to_string(n_regions) +
            " regions; enable instrument collapsing or reduce lag depth");
    if (n_live < k)
        throw NumericalError("system_gmm: underidentified (" + std::to_string(n_live) +
                             " usable instruments for " + std::to_string(k) + " parameters)");

    Eigen::MatrixXd ZHZ = Eigen::MatrixXd::Zero(n_live, n_live);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_live, k);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n_live);
    for (std::size_t i = 0; i < fit.blocks.size(); ++i) {
        const auto& blk = fit.blocks[i];
        ZHZ.noalias() += blk.Z.transpose() * H_blocks[i] * blk.Z;
        A.noalias() += blk.Z.transpose() * blk.X;
        b.noalias() += blk.Z.transpose() * blk.y;
    }

    const Eigen::MatrixXd W1 = invert_psd(ZHZ, "weighting matrix");
    auto solve_gmm = [&](const Eigen::MatrixXd& W) {
        const Eigen::MatrixXd AtW = A.transpose() * W;
        const Eigen::MatrixXd AtWA = AtW * A;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(AtWA);
        const double max_ev = es.eigenvalues().cwiseAbs().maxCoeff();
        if (max_ev <= 0.0 || es.eigenvalues().minCoeff() <= 1e-12 * max_ev)
            throw NumericalError(
                "system_gmm: rank-deficient system (collinear regressors or weak instruments)");
        const Eigen::MatrixXd AtWA_inv = es.eigenvectors() *
                                         es.eigenvalues().cwiseInverse().asDiagonal() *
                                         es.eigenvectors().transpose();
        return std::make_pair(Eigen::VectorXd(AtWA_inv * (AtW * b)),
                              Eigen::MatrixXd(AtWA_inv));
    };

    auto [theta1, AtW1A_inv] = solve_gmm(W1);

    auto residuals_at = [&](const Eigen::VectorXd& theta) {
        std::vector<Eigen::VectorXd> res;
        res.reserve(fit.blocks.size());
        for (const auto& blk : fit.blocks) res.push_back(blk.y - blk.X * theta);
        return res;
    };
    const auto resid1 = residuals_at(theta1);

    double ssr_diff = 0.0;
    for (std::size_t i = 0; i < fit.blocks.size(); ++i)
        ssr_diff += resid1[i].head(fit.blocks[i].diff_years.size()).squaredNorm();
    const double dof_sigma = std::max(1.0, 2.0 * (fit.n_obs_diff - k));
    const double sigma2 = ssr_diff / dof_sigma;

    Eigen::MatrixXd ZuuZ = Eigen::MatrixXd::Zero(n_live, n_live);
    for (std::size_t i = 0; i < fit.blocks.size(); ++i) {
        const Eigen::VectorXd zu = fit.blocks[i].Z.transpose() * resid1[i];
        ZuuZ.noalias() += zu * zu.transpose();
    }
    fit.W_efficient = invert_psd(ZuuZ, "efficient weighting matrix");
    auto [theta2, AtW2A_inv] = solve_gmm(fit.W_efficient);
    fit.theta_efficient = theta2;

    if (options.two_step) {
        fit.estimator = Estimator::system_gmm_two_step;
        fit.theta = theta2;
        fit.W = fit.W_efficient;
        fit.vcov = AtW2A_inv;  // no Windmeijer correction
        const auto resid2 = residuals_at(theta2);
        for (std::size_t i = 0; i < fit.blocks.size(); ++i) fit.blocks[i].resid = resid2[i];
    } else {
        fit.estimator = Estimator::system_gmm_one_step;
        fit.theta = theta1;
        fit.W = W1;
        fit.vcov = sigma2 * AtW1A_inv;
        for (std::size_t i = 0; i < fit.blocks.size(); ++i) fit.blocks[i].resid = resid1[i];
    }
    fit.A = A;
    fit.P = (fit.vcov.rows() == k ? Eigen::MatrixXd((options.two_step ? AtW2A_inv : AtW1A_inv) *
                                                    (A.transpose() * fit.W))
                                  : Eigen::MatrixXd());
    return fit;
}

TestStat sargan_test(const GmmFit& fit) {
    const int dof = fit.n_instruments - fit.n_params;
    if (dof <= 0) throw NumericalError("sargan_test: model is not overidentified");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(fit.n_instruments);
    for (const auto& blk : fit.blocks)
        g.noalias() += blk.Z.transpose() * (blk.y - blk.X * fit.theta_efficient);
    TestStat out;
    out.statistic = g.dot(fit.W_efficient * g);
    out.dof = dof;
    out.p_value = stats::chi2_upper_p(out.statistic, dof);
    return out;
}

ZTest arellano_bond_test(const GmmFit& fit, int order) {
    if (order < 1) throw DataError("arellano_bond_test: order must be >= 1");
    const int lag = order * fit.lag_step;
    const int k = fit.n_params;

    double numerator = 0.0;
    double term1 = 0.0;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd mid = Eigen::VectorXd::Zero(fit.n_instruments);
    Eigen::MatrixXd ZuuZ = Eigen::MatrixXd::Zero(fit.n_instruments, fit.n_instruments);
    bool any = false;

    for (const auto& blk : fit.blocks) {
        const int nd = static_cast<int>(blk.diff_years.size());
        Eigen::VectorXd e = blk.resid.head(nd);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(nd);
        for (int a = 0; a < nd; ++a) {
            const int want = blk.diff_years[a] - lag;
            for (int c = 0; c < nd; ++c)
                if (blk.diff_years[c] == want) {
                    w(a) = e(c);
                    any = true;
                }
        }
        const double we = w.dot(e);
        numerator += we;
        term1 += we * we;
        q.noalias() += blk.X.topRows(nd).transpose() * w;
        mid.noalias() += (blk.Z.transpose() * blk.resid) * we;
        const Eigen::VectorXd zu = blk.Z.transpose() * blk.resid;
        ZuuZ.noalias() += zu * zu.transpose();
    }
    if (!any)
        throw DataError("arellano_bond_test: insufficient periods for order " +
                        std::to_string(order));

    const Eigen::MatrixXd V_rob = fit.P * ZuuZ * fit.P.transpose();
    const double variance =
        term1 - 2.0 * q.dot(fit.P * mid) + q.dot(V_rob * q);
    if (variance <= 0.0) throw NumericalError("arellano_bond_test: nonpositive variance estimate");
    ZTest out;
    out.z = numerator / std::sqrt(variance);
    out.p_value = stats::normal_two_sided_p(out.z);
    return out;
}

PanelModelResult system_gmm(const RegressionTable& table, const PanelSpec& spec,
                            const GmmOptions& options) {
    const GmmFit fit = system_gmm_fit(table, spec, options);
    PanelModelResult out;
    out.estimator = fit.estimator;
    out.n_obs = fit.n_obs_level;
    out.n_regions = fit.n_regions;
    out.n_instruments = fit.n_instruments;
    out.windmeijer_corrected = false;
    for (int j = 0; j < fit.n_params; ++j)
        out.coefficients.push_back({fit.param_names[j], fit.theta(j),
                                    std::sqrt(std::max(0.0, fit.vcov(j, j)))});
    if (fit.n_instruments > fit.n_params) out.sargan = sargan_test(fit);
    for (int order : {1, 2}) {
        try {
            auto& slot = order == 1 ? out.ar1_test : out.ar2_test;
            slot = arellano_bond_test(fit, order);
        } catch (const DataError&) {
            // too few periods at this order; leave the diagnostic unset
        }
    }
    return out;
}

}  // namespace ecx
