#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecx/types.hpp"

namespace ecx {

// g_r^t = (log y_r^{t+h} - log y_r^t) / h, defined where both endpoints
// exist. Nonpositive y throws DataError naming (region, year).
IndicatorSeries growth_rate(const IndicatorSeries& y, int horizon);

// How the lagged dependent g^{t-1} is dated: the growth window ending at t
// (lag of `horizon` years, non-overlapping) or a plain 1-year shift.
enum class LagMode { non_overlapping, one_year };

struct PanelSpec {
    std::string dependent;
    std::vector<std::string> regressors;     // indicator names, order preserved
    std::vector<std::string> log_transform;  // regressor names entered in logs
    bool include_lagged_dependent = true;
    int horizon = 3;
    LagMode lag_mode = LagMode::non_overlapping;
    bool region_effects = true;
    bool year_effects = true;

    int lag_step() const { return lag_mode == LagMode::non_overlapping ? horizon : 1; }
};

struct DeletionRecord {
    std::string region;
    int year;
    std::string missing;  // name of the first indicator missing at this row
};

// One row per (region, t) where the dependent, every regressor, and (if
// requested) the lagged dependent are all defined. Rows sorted by (region,
// year). Column 0 is the dependent; column 1 the lagged dependent when
// present; regressors follow in spec order.
struct RegressionTable {
    std::vector<std::string> columns;
    std::vector<std::string> region;
    std::vector<int> year;
    Eigen::MatrixXd values;
    bool has_lagged_dependent = false;
    int lag_step = 1;
    std::vector<DeletionRecord> deletion_log;

    Eigen::Index n_rows() const { return values.rows(); }
};

RegressionTable build_panel(const std::vector<const IndicatorSeries*>& series,
                            const PanelSpec& spec);

enum class Estimator { within_fe, system_gmm_one_step, system_gmm_two_step };

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
};

struct TestStat {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

struct ZTest {
    double z = 0.0;
    double p_value = 1.0;
};

struct PanelModelResult {
    Estimator estimator = Estimator::within_fe;
    std::vector<Coefficient> coefficients;  // model terms, then year dummies/const
    int n_obs = 0;
    int n_regions = 0;
    int n_instruments = 0;
    std::optional<TestStat> sargan;
    std::optional<ZTest> ar1_test;
    std::optional<ZTest> ar2_test;
    // Two-step standard errors carry no Windmeijer finite-sample correction.
    bool windmeijer_corrected = false;

    const Coefficient* find(const std::string& name) const;
};

// Two-way fixed effects: iterated region/year demeaning, OLS on the
// transformed data, standard errors clustered by region. Throws
// NumericalError listing collinear columns on rank deficiency.
PanelModelResult within_fe(const RegressionTable& table, const PanelSpec& spec);

struct GmmOptions {
    bool two_step = false;
    bool collapse_instruments = true;
    int max_lag_depth = 4;         // dependent level lags 2..max_lag_depth (diff eq)
    int predetermined_max_lag = 3; // regressor level lags 1..predetermined_max_lag (diff eq)
};

// Arellano-Bover/Blundell-Bond system GMM fit with everything the diagnostic
// tests need: per-region instrument/design/residual blocks and the estimator
// linearization pieces.
struct GmmFit {
    Estimator estimator = Estimator::system_gmm_one_step;
    std::vector<std::string> param_names;
    Eigen::VectorXd theta;
    Eigen::MatrixXd vcov;
    int n_obs_diff = 0;
    int n_obs_level = 0;
    int n_regions = 0;
    int n_instruments = 0;
    int n_params = 0;
    int lag_step = 1;

    struct Block {
        std::vector<int> diff_years;
        std::vector<int> level_years;
        Eigen::MatrixXd Z;      // (nd+nl) x L
        Eigen::MatrixXd X;      // (nd+nl) x k
        Eigen::VectorXd y;      // nd+nl
        Eigen::VectorXd resid;  // at the reported estimate
    };
    std::vector<Block> blocks;

    Eigen::MatrixXd A;            // sum_i Z_i' X_i
    Eigen::MatrixXd W;            // weighting at the reported estimate
    Eigen::MatrixXd P;            // (A'WA)^{-1} A'W
    Eigen::VectorXd theta_efficient;  // two-step estimate (for the Sargan-Hansen test)
    Eigen::MatrixXd W_efficient;      // robust weighting from first-step residuals
};

// Estimates the difference+level system. Requires include_lagged_dependent.
// Throws DataError on unusable panels, NumericalError on singular weighting,
// and "instrument proliferation" when n_instruments >= n_regions.
GmmFit system_gmm_fit(const RegressionTable& table, const PanelSpec& spec,
                      const GmmOptions& options);

// Sargan-Hansen overidentification J = g' W g at the efficient-GMM estimate,
// chi-square with (n_instruments - n_params) dof. Throws NumericalError for
// just-identified models.
TestStat sargan_test(const GmmFit& fit);

// Arellano-Bond order-m autocorrelation z test on differenced residuals.
ZTest arellano_bond_test(const GmmFit& fit, int order);

// Convenience wrapper: fit + Sargan + AR(1)/AR(2) packaged as a result row.
PanelModelResult system_gmm(const RegressionTable& table, const PanelSpec& spec,
                            const GmmOptions& options);

// VIF_k = 1/(1-R^2_k) from regressing regressor k on the others with
// intercept. Exact collinearity reports +infinity rather than throwing.
std::map<std::string, double> vif(const RegressionTable& table,
                                  const std::vector<std::string>& regressors);

}  // namespace ecx
