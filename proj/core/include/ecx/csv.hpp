#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ecx/types.hpp"

namespace ecx::csv {

// All pipeline files are long-format CSV, UTF-8, header row required,
// '.' decimal point, no thousands separators, 4-digit integer years.

// Splits one line on commas. No quoting support: identifiers in this domain
// (IBGE codes, HS/CNAE codes) never contain commas.
std::vector<std::string> split(const std::string& line);

// Streams rows of a CSV file. Verifies the header matches `expected_header`
// exactly and that every row has the same arity; `fn` receives the 1-based
// line number and the fields. Throws DataError on malformed input.
void for_each_row(const std::string& path, const std::vector<std::string>& expected_header,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& fn);

// Strict numeric parsing (std::from_chars); throws DataError naming the line.
double parse_double(const std::string& field, std::size_t line_no);
int parse_year(const std::string& field, std::size_t line_no);

// Shortest round-trip decimal representation (std::to_chars); deterministic
// and locale-independent, so rewritten files are byte-identical.
std::string format_double(double v);

class Writer {
   public:
    explicit Writer(const std::string& path);
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void row(const std::vector<std::string>& fields);

   private:
    struct Impl;
    Impl* impl_;
};

// --- concrete formats -------------------------------------------------------

// intensity file: region,activity,year,value
ActivityPanel read_intensity(const std::string& path);
void write_intensity(const std::string& path, const ActivityPanel& panel);

// indicator file: region,year,value
IndicatorSeries read_indicator(const std::string& path, const std::string& name,
                               const std::string& units = "");
void write_indicator(const std::string& path, const IndicatorSeries& series);

// adjacency file: region_a,region_b (undirected, duplicates tolerated)
RegionGraph read_adjacency(const std::string& path);
void write_adjacency(const std::string& path, const RegionGraph& graph);

// activity,year,<value_col>: external shares (value_col="share") and
// PCI inputs (value_col="pci")
std::map<std::pair<std::string, int>, double> read_activity_year(const std::string& path,
                                                                 const std::string& value_col);
void write_activity_year(const std::string& path, const std::string& value_col,
                         const std::map<std::pair<std::string, int>, double>& values);

// year,value: price index
std::map<int, double> read_year_value(const std::string& path);

// crosswalk file: sub_region,region (many-to-one)
std::map<std::string, std::string> read_crosswalk(const std::string& path);

// --- checksums --------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t v);

}  // namespace ecx::csv
