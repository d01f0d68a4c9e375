#include "ecx/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ecx/errors.hpp"

namespace ecx {

std::optional<int> ActivityPanel::region_index(const std::string& r) const {
    auto it = region_idx_.find(r);
    if (it == region_idx_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> ActivityPanel::activity_index(const std::string& a) const {
    auto it = activity_idx_.find(a);
    if (it == activity_idx_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> ActivityPanel::year_index(int year) const {
    auto it = year_idx_.find(year);
    if (it == year_idx_.end()) return std::nullopt;
    return it->second;
}

Eigen::MatrixXd ActivityPanel::year_slice(int year) const {
    auto yi = year_index(year);
    if (!yi) throw DataError("year " + std::to_string(year) + " not present in panel");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(regions_.size()),
                                                static_cast<Eigen::Index>(activities_.size()));
    for (const auto& [key, v] : values_) {
        if (key.year == *yi) out(key.region, key.activity) = v;
    }
    return out;
}

double ActivityPanel::total() const {
    double s = 0.0;
    for (const auto& [key, v] : values_) s += v;
    return s;
}

void ActivityPanelBuilder::add(const std::string& region, const std::string& activity, int year,
                               double value) {
    if (value < 0.0 || !std::isfinite(value))
        throw DataError("negative or non-finite intensity value");
    if (value == 0.0) return;
    acc_[{region, activity, year}] += value;
}

ActivityPanel ActivityPanelBuilder::build() {
    ActivityPanel p;
    std::set<std::string> regions, activities;
    std::set<int> years;
    for (const auto& [k, v] : acc_) {
        regions.insert(std::get<0>(k));
        activities.insert(std::get<1>(k));
        years.insert(std::get<2>(k));
    }
    p.regions_.assign(regions.begin(), regions.end());
    p.activities_.assign(activities.begin(), activities.end());
    p.years_.assign(years.begin(), years.end());
    for (int i = 0; i < static_cast<int>(p.regions_.size()); ++i) p.region_idx_[p.regions_[i]] = i;
    for (int i = 0; i < static_cast<int>(p.activities_.size()); ++i)
        p.activity_idx_[p.activities_[i]] = i;
    for (int i = 0; i < static_cast<int>(p.years_.size()); ++i) p.year_idx_[p.years_[i]] = i;
    for (const auto& [k, v] : acc_) {
        if (v == 0.0) continue;
        p.values_[{p.region_idx_[std::get<0>(k)], p.activity_idx_[std::get<1>(k)],
                   p.year_idx_[std::get<2>(k)]}] = v;
    }
    return p;
}

void SpecializationMatrix::validate() const {
    const auto nr = entries.rows(), na = entries.cols();
    if (nr != static_cast<Eigen::Index>(regions.size()) ||
        na != static_cast<Eigen::Index>(activities.size()))
        throw DataError("specialization matrix dimensions do not match identifier lists");
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index a = 0; a < na; ++a)
            if (entries(r, a) != 0.0 && entries(r, a) != 1.0)
                throw DataError("specialization matrix entry not in {0,1}");
    const Eigen::VectorXd div = entries.rowwise().sum();
    const Eigen::VectorXd ubi = entries.colwise().sum().transpose();
    if (div != diversity || ubi != ubiquity)
        throw DataError("specialization matrix marginals do not match entries");
}

SpecializationMatrix SpecializationMatrix::from_entries(std::vector<std::string> regions,
                                                        std::vector<std::string> activities,
                                                        int year, Eigen::MatrixXd entries,
                                                        std::vector<std::uint8_t> row_no_data) {
    SpecializationMatrix m;
    m.regions = std::move(regions);
    m.activities = std::move(activities);
    m.year = year;
    m.entries = std::move(entries);
    m.diversity = m.entries.rowwise().sum();
    m.ubiquity = m.entries.colwise().sum().transpose();
    m.row_no_data = row_no_data.empty() ? std::vector<std::uint8_t>(m.regions.size(), 0)
                                        : std::move(row_no_data);
    m.validate();
    return m;
}

RegionGraph RegionGraph::from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                                    const std::vector<std::string>& extra_regions) {
    RegionGraph g;
    std::set<std::string> names(extra_regions.begin(), extra_regions.end());
    for (const auto& [a, b] : edges) {
        if (a == b) throw DataError("self-loop edge for region '" + a + "'");
        names.insert(a);
        names.insert(b);
    }
    g.regions_.assign(names.begin(), names.end());
    for (int i = 0; i < static_cast<int>(g.regions_.size()); ++i) g.index_[g.regions_[i]] = i;
    std::set<std::pair<int, int>> dedup;
    for (const auto& [a, b] : edges) {
        int ia = g.index_[a], ib = g.index_[b];
        dedup.insert({std::min(ia, ib), std::max(ia, ib)});
    }
    g.neighbors_.assign(g.regions_.size(), {});
    for (const auto& [ia, ib] : dedup) {
        g.neighbors_[ia].push_back(ib);
        g.neighbors_[ib].push_back(ia);
    }
    for (auto& nb : g.neighbors_) std::sort(nb.begin(), nb.end());
    return g;
}

std::size_t RegionGraph::edge_count() const {
    std::size_t d = 0;
    for (const auto& nb : neighbors_) d += nb.size();
    return d / 2;
}

RegionGraph RegionGraph::subgraph(const std::vector<std::string>& keep) const {
    std::set<std::string> keep_set(keep.begin(), keep.end());
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::string> isolated;
    for (int r = 0; r < static_cast<int>(regions_.size()); ++r) {
        if (!keep_set.count(regions_[r])) continue;
        isolated.push_back(regions_[r]);
        for (int n : neighbors_[r]) {
            if (n > r && keep_set.count(regions_[n])) edges.push_back({regions_[r], regions_[n]});
        }
    }
    return from_edges(edges, isolated);
}

void IndicatorSeries::set(const std::string& region, int year, double value) {
    values_[{region, year}] = value;
}

std::optional<double> IndicatorSeries::get(const std::string& region, int year) const {
    auto it = values_.find({region, year});
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

bool IndicatorSeries::has(const std::string& region, int year) const {
    return values_.count({region, year}) > 0;
}

std::vector<std::string> IndicatorSeries::region_universe() const {
    std::set<std::string> s;
    for (const auto& [k, v] : values_) s.insert(k.first);
    return {s.begin(), s.end()};
}

std::vector<int> IndicatorSeries::year_universe() const {
    std::set<int> s;
    for (const auto& [k, v] : values_) s.insert(k.second);
    return {s.begin(), s.end()};
}

AlignedTable align(const std::vector<const IndicatorSeries*>& series, int year_lo, int year_hi) {
    if (series.empty()) throw DataError("align: no series given");
    if (year_hi < year_lo) throw DataError("align: empty year range");

    std::vector<std::string> common = series[0]->region_universe();
    for (std::size_t s = 1; s < series.size(); ++s) {
        const auto rs = series[s]->region_universe();
        std::vector<std::string> merged;
        std::set_intersection(common.begin(), common.end(), rs.begin(), rs.end(),
                              std::back_inserter(merged));
        common = std::move(merged);
    }
    if (common.empty()) throw DataError("no overlapping regions");

    AlignedTable t;
    for (const auto* s : series) t.series_names.push_back(s->name());
    t.regions = std::move(common);
    for (int y = year_lo; y <= year_hi; ++y) t.years.push_back(y);
    t.cells.resize(t.regions.size() * t.years.size());
    for (std::size_t ri = 0; ri < t.regions.size(); ++ri) {
        for (std::size_t yi = 0; yi < t.years.size(); ++yi) {
            auto& row = t.cells[t.row(ri, yi)];
            row.reserve(series.size());
            for (const auto* s : series) row.push_back(s->get(t.regions[ri], t.years[yi]));
        }
    }
    return t;
}

}  // namespace ecx
