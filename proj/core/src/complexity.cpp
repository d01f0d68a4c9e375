#include "ecx/complexity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecx/errors.hpp"
#include "ecx/stats.hpp"

namespace ecx {

namespace {

constexpr double kImagTol = 1e-8;
constexpr double kSeparationTol = 1e-10;
constexpr int kDenseLimit = 2000;

SpecializationMatrix select_submatrix(const SpecializationMatrix& m,
                                      const std::vector<int>& keep_regions,
                                      const std::vector<int>& keep_activities) {
    std::vector<std::string> regions, activities;
    std::vector<std::uint8_t> no_data;
    regions.reserve(keep_regions.size());
    for (int r : keep_regions) {
        regions.push_back(m.regions[r]);
        no_data.push_back(m.row_no_data[r]);
    }
    activities.reserve(keep_activities.size());
    for (int a : keep_activities) activities.push_back(m.activities[a]);
    Eigen::MatrixXd entries(keep_regions.size(), keep_activities.size());
    for (std::size_t i = 0; i < keep_regions.size(); ++i)
        for (std::size_t j = 0; j < keep_activities.size(); ++j)
            entries(i, j) = m.entries(keep_regions[i], keep_activities[j]);
    return SpecializationMatrix::from_entries(std::move(regions), std::move(activities), m.year,
                                              std::move(entries), std::move(no_data));
}

std::string drop_reason_region(const SpecializationMatrix& m, int r) {
    return m.row_no_data[r] ? "no data" : "no specializations";
}

// Connected components of the region-activity bipartite graph. Returns a
// component label per region and per activity (-1 for none, impossible after
// pruning).
struct Components {
    std::vector<int> region_label;
    std::vector<int> activity_label;
    int count = 0;
};

Components bipartite_components(const SpecializationMatrix& m) {
    const int nr = static_cast<int>(m.regions.size());
    const int na = static_cast<int>(m.activities.size());
    Components c;
    c.region_label.assign(nr, -1);
    c.activity_label.assign(na, -1);
    std::vector<int> stack;
    for (int seed = 0; seed < nr; ++seed) {
        if (c.region_label[seed] != -1) continue;
        const int label = c.count++;
        c.region_label[seed] = label;
        stack.push_back(seed);
        std::vector<int> astack;
        while (!stack.empty() || !astack.empty()) {
            while (!stack.empty()) {
                const int r = stack.back();
                stack.pop_back();
                for (int a = 0; a < na; ++a) {
                    if (m.entries(r, a) != 0.0 && c.activity_label[a] == -1) {
                        c.activity_label[a] = label;
                        astack.push_back(a);
                    }
                }
            }
            while (!astack.empty()) {
                const int a = astack.back();
                astack.pop_back();
                for (int r = 0; r < nr; ++r) {
                    if (m.entries(r, a) != 0.0 && c.region_label[r] == -1) {
                        c.region_label[r] = label;
                        stack.push_back(r);
                    }
                }
            }
        }
    }
    return c;
}

struct EigenPair {
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    Eigen::VectorXd k;
};

// Full eigendecomposition of Mhat; eigenvalues sorted by real part
// descending, K taken from the second.
EigenPair solve_dense(const Eigen::MatrixXd& mhat) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(mhat);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const auto& vals = solver.eigenvalues();
    const int n = static_cast<int>(vals.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals(a).real() > vals(b).real(); });
    if (std::abs(vals(order[0]).imag()) > kImagTol || std::abs(vals(order[1]).imag()) > kImagTol)
        throw NumericalError("complex spectrum");
    EigenPair out;
    out.lambda2 = vals(order[1]).real();
    out.lambda3 = n > 2 ? vals(order[2]).real() : -std::numeric_limits<double>::infinity();
    out.k = solver.eigenvectors().col(order[1]).real();
    return out;
}

// Power iteration with deflation on the symmetric similarity transform
// S = D_r^{-1/2} M D_i^{-1} M' D_r^{-1/2}, which shares Mhat's spectrum;
// eigenvectors map back through D_r^{-1/2}. Used above the dense size limit.
EigenPair solve_power(const SpecializationMatrix& m) {
    const Eigen::Index nr = m.entries.rows();
    const Eigen::VectorXd dr_isqrt = m.diversity.array().sqrt().inverse();
    const Eigen::MatrixXd B =
        dr_isqrt.asDiagonal() * m.entries * m.ubiquity.array().inverse().matrix().asDiagonal();
    // S x = B (M' (D_r^{-1/2} x)) without forming S explicitly.
    const Eigen::MatrixXd Mt_drisqrt = m.entries.transpose() * dr_isqrt.asDiagonal();
    auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return B * (Mt_drisqrt * x); };

    // Leading eigenvector of S is D_r^{1/2} * 1 (eigenvalue 1).
    Eigen::VectorXd v1 = m.diversity.array().sqrt();
    v1.normalize();

    auto power_deflated = [&](const std::vector<Eigen::VectorXd>& deflate, double& lambda_out) {
        Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(nr, 1.0, 2.0 + static_cast<double>(nr));
        for (const auto& v : deflate) x -= v.dot(x) * v;
        x.normalize();
        double lambda = 0.0;
        for (int it = 0; it < 20000; ++it) {
            Eigen::VectorXd y = apply(x);
            for (const auto& v : deflate) y -= v.dot(y) * v;
            const double norm = y.norm();
            if (norm < 1e-300) throw NumericalError("degenerate system");
            y /= norm;
            const double lambda_new = y.dot(apply(y));
            if (std::abs(lambda_new - lambda) < 1e-14 && it > 10) {
                x = y;
                lambda = lambda_new;
                break;
            }
            x = y;
            lambda = lambda_new;
        }
        lambda_out = lambda;
        return x;
    };

    EigenPair out;
    const Eigen::VectorXd v2 = power_deflated({v1}, out.lambda2);
    double lambda3 = 0.0;
    power_deflated({v1, v2}, lambda3);
    out.lambda3 = lambda3;
    out.k = dr_isqrt.asDiagonal() * v2;
    return out;
}

}  // namespace

PruneResult prune_to_core(const SpecializationMatrix& m) {
    m.validate();
    const int nr = static_cast<int>(m.regions.size());
    const int na = static_cast<int>(m.activities.size());
    std::vector<std::uint8_t> keep_r(nr, 1), keep_a(na, 1);
    PruneResult out;

    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < nr; ++r) {
            if (!keep_r[r]) continue;
            double d = 0.0;
            for (int a = 0; a < na; ++a)
                if (keep_a[a]) d += m.entries(r, a);
            if (d == 0.0) {
                keep_r[r] = 0;
                out.dropped_regions.push_back({m.regions[r], drop_reason_region(m, r)});
                changed = true;
            }
        }
        for (int a = 0; a < na; ++a) {
            if (!keep_a[a]) continue;
            double u = 0.0;
            for (int r = 0; r < nr; ++r)
                if (keep_r[r]) u += m.entries(r, a);
            if (u == 0.0) {
                keep_a[a] = 0;
                out.dropped_activities.push_back({m.activities[a], "no specialized regions"});
                changed = true;
            }
        }
    }

    std::vector<int> regions, activities;
    for (int r = 0; r < nr; ++r)
        if (keep_r[r]) regions.push_back(r);
    for (int a = 0; a < na; ++a)
        if (keep_a[a]) activities.push_back(a);
    if (regions.empty() || activities.empty()) {
        out.matrix = SpecializationMatrix::from_entries({}, {}, m.year, Eigen::MatrixXd(0, 0), {});
        return out;
    }

    SpecializationMatrix pruned = select_submatrix(m, regions, activities);
    const Components comps = bipartite_components(pruned);
    if (comps.count > 1) {
        std::vector<int> region_count(comps.count, 0);
        std::vector<double> mass(comps.count, 0.0);
        for (std::size_t r = 0; r < pruned.regions.size(); ++r) {
            region_count[comps.region_label[r]]++;
            mass[comps.region_label[r]] += pruned.diversity(static_cast<Eigen::Index>(r));
        }
        int best = 0;
        for (int c = 1; c < comps.count; ++c) {
            if (region_count[c] > region_count[best] ||
                (region_count[c] == region_count[best] && mass[c] > mass[best]))
                best = c;
        }
        std::vector<int> keep_regions, keep_activities;
        for (std::size_t r = 0; r < pruned.regions.size(); ++r) {
            if (comps.region_label[r] == best)
                keep_regions.push_back(static_cast<int>(r));
            else
                out.dropped_regions.push_back({pruned.regions[r], "disconnected"});
        }
        for (std::size_t a = 0; a < pruned.activities.size(); ++a) {
            if (comps.activity_label[a] == best)
                keep_activities.push_back(static_cast<int>(a));
            else
                out.dropped_activities.push_back({pruned.activities[a], "disconnected"});
        }
        pruned = select_submatrix(pruned, keep_regions, keep_activities);
    }
    out.matrix = std::move(pruned);
    return out;
}

ComplexityResult eci_from_external(const SpecializationMatrix& m,
                                   const std::map<std::string, double>& pci) {
    m.validate();
    ComplexityResult out;
    out.year = m.year;
    std::vector<std::string> included;
    std::vector<double> raw;
    for (std::size_t r = 0; r < m.regions.size(); ++r) {
        const double d = m.diversity(static_cast<Eigen::Index>(r));
        if (d < 1.0) {
            out.dropped_regions.push_back(
                {m.regions[r], drop_reason_region(m, static_cast<int>(r))});
            continue;
        }
        double sum = 0.0;
        for (std::size_t a = 0; a < m.activities.size(); ++a) {
            if (m.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a)) == 0.0)
                continue;
            auto it = pci.find(m.activities[a]);
            if (it == pci.end())
                throw DataError("pci missing for activity '" + m.activities[a] + "'");
            sum += it->second;
        }
        included.push_back(m.regions[r]);
        raw.push_back(sum / d);
    }
    if (included.size() < 2) throw NumericalError("degenerate system");
    Eigen::VectorXd k = Eigen::Map<const Eigen::VectorXd>(raw.data(), raw.size());
    Eigen::VectorXd standardized;
    try {
        standardized = stats::standardize(k);
    } catch (const NumericalError&) {
        throw NumericalError("degenerate system");
    }
    for (std::size_t i = 0; i < included.size(); ++i) {
        out.raw_region[included[i]] = raw[i];
        out.region_scores[included[i]] = standardized(static_cast<Eigen::Index>(i));
    }
    return out;
}

Eigen::MatrixXd build_mhat(const SpecializationMatrix& m) {
    if ((m.diversity.array() == 0.0).any() || (m.ubiquity.array() == 0.0).any())
        throw NumericalError("prune required");
    // Mhat = D_r^{-1} M D_i^{-1} M'
    return m.diversity.array().inverse().matrix().asDiagonal() * m.entries *
           m.ubiquity.array().inverse().matrix().asDiagonal() * m.entries.transpose();
}

ComplexityResult eigen_complexity(const SpecializationMatrix& m, EigenMethod method) {
    PruneResult pruned = prune_to_core(m);
    const SpecializationMatrix& core = pruned.matrix;
    ComplexityResult out;
    out.year = m.year;
    out.dropped_regions = std::move(pruned.dropped_regions);
    out.dropped_activities = std::move(pruned.dropped_activities);

    if (core.regions.size() < 3 || core.activities.size() < 3)
        throw NumericalError("degenerate system");

    EigenPair pair;
    const bool use_dense = method == EigenMethod::dense ||
                           (method == EigenMethod::automatic &&
                            static_cast<int>(core.regions.size()) < kDenseLimit);
    if (use_dense) {
        pair = solve_dense(build_mhat(core));
    } else {
        pair = solve_power(core);
    }
    if (pair.lambda2 - pair.lambda3 <= kSeparationTol * std::max(1.0, std::abs(pair.lambda2)))
        throw NumericalError("degenerate system");

    Eigen::VectorXd k = pair.k;
    // Sign convention: more diverse regions score higher at first order.
    double corr = 0.0;
    try {
        std::vector<double> kv(k.data(), k.data() + k.size());
        std::vector<double> dv(core.diversity.data(), core.diversity.data() + core.diversity.size());
        corr = stats::pearson(kv, dv);
    } catch (const NumericalError&) {
        throw NumericalError("degenerate system");
    }
    if (corr < 0.0) k = -k;

    // Q_i = (1/M_{*,i}) sum_r M_{r,i} K_r, the recursion's own definition of
    // activity complexity given K.
    const Eigen::VectorXd q =
        (core.entries.transpose() * k).array() / core.ubiquity.array();

    Eigen::VectorXd k_std, q_std;
    try {
        k_std = stats::standardize(k);
        q_std = stats::standardize(q);
    } catch (const NumericalError&) {
        throw NumericalError("degenerate system");
    }

    for (std::size_t r = 0; r < core.regions.size(); ++r) {
        out.raw_region[core.regions[r]] = k(static_cast<Eigen::Index>(r));
        out.region_scores[core.regions[r]] = k_std(static_cast<Eigen::Index>(r));
    }
    for (std::size_t a = 0; a < core.activities.size(); ++a) {
        out.raw_activity[core.activities[a]] = q(static_cast<Eigen::Index>(a));
        out.activity_scores[core.activities[a]] = q_std(static_cast<Eigen::Index>(a));
    }
    return out;
}

ReflectionsResult reflections(const SpecializationMatrix& m, int iterations) {
    m.validate();
    if (iterations < 0) throw NumericalError("reflections: negative iteration count");
    if ((m.diversity.array() == 0.0).any() || (m.ubiquity.array() == 0.0).any())
        throw NumericalError("prune required");
    const Components comps = bipartite_components(m);
    if (comps.count != 1)
        throw NumericalError("disconnected: " + std::to_string(comps.count) + " components");
    if (m.regions.size() < 3 || m.activities.size() < 3)
        throw NumericalError("degenerate system");

    ReflectionsResult out;
    out.regions = m.regions;
    out.activities = m.activities;

    // The module's sign convention (corr(K, diversity) >= 0) applies to the
    // stored iterates as well; the raw recursion keeps its own orientation,
    // which can converge to the mirrored eigenvector depending on the
    // diversity vector's expansion coefficients.
    std::vector<double> div(m.diversity.data(), m.diversity.data() + m.diversity.size());
    auto store = [&](const Eigen::VectorXd& k, const Eigen::VectorXd& q) {
        double sign = 1.0;
        try {
            std::vector<double> kv(k.data(), k.data() + k.size());
            if (stats::pearson(kv, div) < 0.0) sign = -1.0;
        } catch (const NumericalError&) {
        }
        out.region_iterates.push_back(sign * k);
        out.activity_iterates.push_back(sign * q);
    };

    Eigen::VectorXd k = stats::standardize(m.diversity);
    Eigen::VectorXd q = stats::standardize(m.ubiquity);
    store(k, q);
    for (int n = 1; n <= iterations; ++n) {
        const Eigen::VectorXd k_next = (m.entries * q).array() / m.diversity.array();
        const Eigen::VectorXd q_next = (m.entries.transpose() * k).array() / m.ubiquity.array();
        k = stats::standardize(k_next);
        q = stats::standardize(q_next);
        store(k, q);
    }
    return out;
}

}  // namespace ecx
