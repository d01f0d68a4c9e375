#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecx {

// Region x activity x year nonnegative intensity tensor (hours worked,
// export value). Zero entries are absent from storage. Immutable once built.
class ActivityPanel {
   public:
    struct Key {
        int region;
        int activity;
        int year;
        auto operator<=>(const Key&) const = default;
    };

    const std::vector<std::string>& regions() const { return regions_; }
    const std::vector<std::string>& activities() const { return activities_; }
    const std::vector<int>& years() const { return years_; }
    const std::map<Key, double>& values() const { return values_; }

    std::optional<int> region_index(const std::string& r) const;
    std::optional<int> activity_index(const std::string& a) const;
    std::optional<int> year_index(int year) const;

    // Dense regions x activities slice for one year; absent entries are 0.
    Eigen::MatrixXd year_slice(int year) const;

    double total() const;

    friend class ActivityPanelBuilder;

   private:
    std::vector<std::string> regions_;
    std::vector<std::string> activities_;
    std::vector<int> years_;
    std::map<std::string, int> region_idx_;
    std::map<std::string, int> activity_idx_;
    std::map<int, int> year_idx_;
    std::map<Key, double> values_;
};

// Accumulates (region, activity, year, value) records, summing duplicates.
// Negative values are rejected; zeros are accepted and dropped.
class ActivityPanelBuilder {
   public:
    void add(const std::string& region, const std::string& activity, int year, double value);
    ActivityPanel build();

   private:
    std::map<std::tuple<std::string, std::string, int>, double> acc_;
};

// Binary region x activity matrix for one year, with diversity/ubiquity
// marginals. Rows flagged no_data had undefined RCA (zero total intensity).
struct SpecializationMatrix {
    std::vector<std::string> regions;
    std::vector<std::string> activities;
    int year = 0;
    Eigen::MatrixXd entries;        // entries in {0,1}
    Eigen::VectorXd diversity;      // row sums
    Eigen::VectorXd ubiquity;       // column sums
    std::vector<std::uint8_t> row_no_data;

    // Recompute marginals from entries; throws DataError on mismatch or on
    // entries outside {0,1}.
    void validate() const;

    static SpecializationMatrix from_entries(std::vector<std::string> regions,
                                             std::vector<std::string> activities, int year,
                                             Eigen::MatrixXd entries,
                                             std::vector<std::uint8_t> row_no_data = {});
};

// Undirected adjacency among regions. Symmetric, no self-loops.
class RegionGraph {
   public:
    // Edges as id pairs; duplicate and reversed-duplicate edges are
    // deduplicated. extra_regions lets callers include isolated regions that
    // appear in no edge. Self-loops throw DataError.
    static RegionGraph from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                                  const std::vector<std::string>& extra_regions = {});

    const std::vector<std::string>& regions() const { return regions_; }
    const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
    int degree(int r) const { return static_cast<int>(neighbors_[r].size()); }
    std::size_t edge_count() const;

    // Induced subgraph on the given regions (ids not present are ignored).
    RegionGraph subgraph(const std::vector<std::string>& keep) const;

   private:
    std::vector<std::string> regions_;
    std::map<std::string, int> index_;
    std::vector<std::vector<int>> neighbors_;
};

// Per-region, per-year scalar indicator. Absent keys mean missing, never zero.
class IndicatorSeries {
   public:
    IndicatorSeries() = default;
    IndicatorSeries(std::string name, std::string units) : name_(std::move(name)), units_(std::move(units)) {}

    const std::string& name() const { return name_; }
    const std::string& units() const { return units_; }

    IndicatorSeries renamed(std::string name) const {
        IndicatorSeries out = *this;
        out.name_ = std::move(name);
        return out;
    }

    void set(const std::string& region, int year, double value);
    std::optional<double> get(const std::string& region, int year) const;
    bool has(const std::string& region, int year) const;

    const std::map<std::pair<std::string, int>, double>& values() const { return values_; }
    std::vector<std::string> region_universe() const;
    std::vector<int> year_universe() const;
    std::size_t size() const { return values_.size(); }

   private:
    std::string name_;
    std::string units_;
    std::map<std::pair<std::string, int>, double> values_;
};

// Rectangular (region, year) x series table with explicit missing markers.
struct AlignedTable {
    std::vector<std::string> series_names;
    std::vector<std::string> regions;  // sorted
    std::vector<int> years;            // requested range, ascending
    // Row-major over (region, year); one optional cell per series.
    std::vector<std::vector<std::optional<double>>> cells;

    std::size_t row(std::size_t region_idx, std::size_t year_idx) const {
        return region_idx * years.size() + year_idx;
    }
};

// One row per (region, year) for regions common to every series and years in
// [year_lo, year_hi]. Missing values stay explicit. Throws DataError when the
// series share no region.
AlignedTable align(const std::vector<const IndicatorSeries*>& series, int year_lo, int year_hi);

}  // namespace ecx
