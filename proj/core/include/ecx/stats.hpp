#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace ecx::stats {

double mean(std::span<const double> x);

// Population moments (divide by n), matching the expectation-bracket
// definitions used for skewness and score standardization.
double variance_pop(std::span<const double> x);
double stddev_pop(std::span<const double> x);

// Sample skewness with population moments: <(x-m)^3> / <(x-m)^2>^{3/2}.
// Throws NumericalError for n < 3 or zero variance.
double skewness(std::span<const double> x);

// Pearson correlation; throws NumericalError if either vector has zero
// variance or sizes mismatch / n < 2.
double pearson(std::span<const double> x, std::span<const double> y);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

// (v - mean) / std_pop. Throws NumericalError when std_pop < eps.
Eigen::VectorXd standardize(const Eigen::VectorXd& v, double eps = 1e-12);

// Average ranks in [1, n], ties get the mean of their rank range.
std::vector<double> ranks(std::span<const double> x);

// Two-sided tail probability of |Z| >= |z| for a standard normal.
double normal_two_sided_p(double z);

// Upper-tail probability of a chi-square with k degrees of freedom.
double chi2_upper_p(double x, int k);

inline double mean(const std::vector<double>& x) { return mean(std::span<const double>(x)); }

}  // namespace ecx::stats
