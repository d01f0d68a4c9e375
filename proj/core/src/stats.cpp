#include "ecx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecx/errors.hpp"

namespace ecx::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw NumericalError("mean of empty vector");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance_pop(std::span<const double> x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

double stddev_pop(std::span<const double> x) { return std::sqrt(variance_pop(x)); }

double skewness(std::span<const double> x) {
    if (x.size() < 3) throw NumericalError("skewness requires at least 3 values");
    const double m = mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    const double n = static_cast<double>(x.size());
    m2 /= n;
    m3 /= n;
    if (m2 <= 0.0) throw NumericalError("skewness undefined: zero variance");
    return m3 / std::pow(m2, 1.5);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw NumericalError("pearson: size mismatch");
    if (x.size() < 2) throw NumericalError("pearson: need at least 2 points");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw NumericalError("pearson undefined: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> ranks(std::span<const double> x) {
    const size_t n = x.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    return pearson(rx, ry);
}

Eigen::VectorXd standardize(const Eigen::VectorXd& v, double eps) {
    const double m = v.mean();
    const double sd = std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size()));
    if (!(sd > eps)) throw NumericalError("standardize: zero or near-zero standard deviation");
    return (v.array() - m) / sd;
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

namespace {

// Regularized incomplete gamma: series for P(a,x), continued fraction for Q(a,x).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi2_upper_p(double x, int k) {
    if (k <= 0) throw NumericalError("chi2_upper_p: dof must be positive");
    if (x <= 0.0) return 1.0;
    const double a = 0.5 * k;
    const double hx = 0.5 * x;
    if (hx < a + 1.0) return 1.0 - gamma_p_series(a, hx);
    return gamma_q_contfrac(a, hx);
}

}  // namespace ecx::stats
