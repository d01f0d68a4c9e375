#include "ecx/synth.hpp"

#include <cmath>

#include "ecx/errors.hpp"
#include "ecx/rng.hpp"

namespace ecx::synth {

namespace {

std::string padded_id(char prefix, int index, int count) {
    int width = 1;
    for (int c = count; c >= 10; c /= 10) ++width;
    std::string digits = std::to_string(index + 1);
    return prefix + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

std::string region_id(int index, int count) { return padded_id('R', index, count); }
std::string activity_id(int index, int count) { return padded_id('A', index, count); }

SpecializationMatrix gen_specialization(int n_regions, int n_activities,
                                        const SpecializationModel& model, std::uint64_t seed,
                                        int year) {
    if (n_regions < 3 || n_activities < 3)
        throw DataError("gen_specialization: dimensions must be >= 3");
    Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(n_regions, n_activities);
    Rng rng(seed);

    if (std::holds_alternative<Nested>(model)) {
        for (int r = 0; r < n_regions; ++r) {
            const int d = static_cast<int>(std::ceil(
                static_cast<double>(n_activities) * (n_regions - r) / n_regions));
            for (int a = 0; a < d; ++a) entries(r, a) = 1.0;
        }
    } else if (const auto* rnd = std::get_if<Random>(&model)) {
        if (!(rnd->density > 0.0 && rnd->density < 1.0))
            throw DataError("gen_specialization: density must lie in (0,1)");
        for (int r = 0; r < n_regions; ++r)
            for (int a = 0; a < n_activities; ++a)
                if (rng.bernoulli(rnd->density)) entries(r, a) = 1.0;
    } else {
        const int k = std::get<Block>(model).blocks;
        if (k < 1 || k > n_regions || k > n_activities)
            throw DataError("gen_specialization: invalid block count");
        for (int b = 0; b < k; ++b) {
            const int r0 = b * n_regions / k, r1 = (b + 1) * n_regions / k;
            const int a0 = b * n_activities / k, a1 = (b + 1) * n_activities / k;
            const int nr = r1 - r0, na = a1 - a0;
            for (int r = 0; r < nr; ++r) {
                const int d = std::max(1, static_cast<int>(std::ceil(
                                              static_cast<double>(na) * (nr - r) / nr)));
                for (int a = 0; a < d; ++a) entries(r0 + r, a0 + a) = 1.0;
            }
        }
    }

    std::vector<std::string> regions, activities;
    for (int r = 0; r < n_regions; ++r) regions.push_back(region_id(r, n_regions));
    for (int a = 0; a < n_activities; ++a) activities.push_back(activity_id(a, n_activities));
    return SpecializationMatrix::from_entries(std::move(regions), std::move(activities), year,
                                              std::move(entries));
}

RegionGraph gen_region_graph(const GraphModel& model, std::uint64_t) {
    std::vector<std::pair<std::string, std::string>> edges;
    if (const auto* c = std::get_if<Cycle>(&model)) {
        if (c->n < 3) throw DataError("gen_region_graph: cycle needs n >= 3");
        for (int i = 0; i < c->n; ++i)
            edges.push_back({region_id(i, c->n), region_id((i + 1) % c->n, c->n)});
    } else if (const auto* g = std::get_if<Grid>(&model)) {
        if (g->rows < 1 || g->cols < 1) throw DataError("gen_region_graph: invalid grid");
        const int n = g->rows * g->cols;
        auto id = [&](int r, int c) { return region_id(r * g->cols + c, n); };
        for (int r = 0; r < g->rows; ++r)
            for (int c = 0; c < g->cols; ++c) {
                if (c + 1 < g->cols) edges.push_back({id(r, c), id(r, c + 1)});
                if (r + 1 < g->rows) edges.push_back({id(r, c), id(r + 1, c)});
            }
    } else {
        const int m = std::get<TwoCliques>(model).clique_size;
        if (m < 2) throw DataError("gen_region_graph: clique size must be >= 2");
        const int n = 2 * m;
        for (int half = 0; half < 2; ++half)
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    edges.push_back({region_id(half * m + i, n), region_id(half * m + j, n)});
    }
    return RegionGraph::from_edges(edges);
}

DynamicPanelData gen_dynamic_panel(const DynamicPanelSpec& spec) {
    if (std::abs(spec.rho) >= 1.0) throw DataError("gen_dynamic_panel: |rho| must be < 1");
    if (std::abs(spec.x_rho) >= 1.0) throw DataError("gen_dynamic_panel: |x_rho| must be < 1");
    if (std::abs(spec.ar_eps) >= 1.0) throw DataError("gen_dynamic_panel: |ar_eps| must be < 1");
    if (spec.n_regions < 1 || spec.n_periods < 1)
        throw DataError("gen_dynamic_panel: invalid dimensions");

    constexpr int kBurnIn = 50;
    Rng rng(spec.seed);
    DynamicPanelData out;
    out.y = IndicatorSeries("y", "");
    out.x = IndicatorSeries("x", "");

    for (int i = 0; i < spec.n_regions; ++i) {
        const std::string region = region_id(i, spec.n_regions);
        const double mu = spec.sigma_mu * rng.normal();
        out.mu[region] = mu;

        // Start each process at its deterministic fixed point so that the
        // zero-noise case is exact from the first period.
        double x = spec.x_mu_weight * mu / (1.0 - spec.x_rho);
        double y = (spec.beta * x + mu) / (1.0 - spec.rho);
        double eps = 0.0;
        for (int t = -kBurnIn; t < spec.n_periods; ++t) {
            x = spec.x_rho * x + spec.x_mu_weight * mu + spec.sigma_x * rng.normal();
            eps = spec.ar_eps * eps + spec.sigma_eps * rng.normal();
            y = spec.rho * y + spec.beta * x + mu + eps;
            if (t >= 0) {
                out.y.set(region, spec.first_year + t, y);
                out.x.set(region, spec.first_year + t, x);
            }
        }
    }
    return out;
}

}  // namespace ecx::synth
