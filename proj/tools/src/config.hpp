#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecx::cli {

// INI-style key/value file with [sections], '#'/';' comments, and '='
// assignments. Parsing is lenient about whitespace; validation is strict and
// reports every problem in one pass.
class Ini {
   public:
    static Ini parse_file(const std::string& path);
    static Ini parse_string(const std::string& text, const std::string& origin = "<string>");

    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, const std::string& value);

    // Keys never read through get(); used to flag typos.
    std::vector<std::string> unknown_keys() const;

    // Canonical serialization (sorted sections/keys) used for config hashing.
    std::string canonical() const;

   private:
    std::map<std::string, std::map<std::string, std::string>> values_;
    mutable std::map<std::string, bool> consumed_;
};

enum class Dataset { industry, exports };
std::string dataset_name(Dataset d);

struct PipelineConfig {
    std::string config_path;
    std::string output_dir;

    // [data]
    std::string industry_intensity;
    std::string export_intensity;
    std::string crosswalk;       // optional
    std::string gdppc;
    std::string population;
    std::string price_index;     // optional
    std::string adjacency;
    std::string pci;             // optional unless the export dataset is requested
    std::string export_shares;   // optional

    // [complexity]
    int year_lo = 0;
    int year_hi = 0;
    double rca_threshold = 1.0;
    std::vector<Dataset> datasets;

    // [spatial]
    std::vector<std::string> spatial_indicators;
    bool neighbor_subset_average = false;

    // [regress]
    std::vector<int> horizons;
    int base_year = 2010;
    bool two_step = false;
    bool collapse_instruments = true;
    int max_lag_depth = 4;
    int predetermined_max_lag = 3;
    std::string lag_mode = "non_overlapping";

    std::string config_hash;  // fnv1a64 of the canonical INI

    bool has_dataset(Dataset d) const;
};

struct CliOverrides {
    std::optional<std::string> output_dir;
    std::optional<std::string> years;
    std::optional<std::string> horizons;
    std::optional<double> rca_threshold;
    std::optional<bool> two_step;
    std::optional<std::string> datasets;
};

// Loads and validates, reporting all problems at once via ConfigError. The
// `command` decides which inputs are mandatory.
PipelineConfig load_config(const std::string& path, const std::string& command,
                           const CliOverrides& overrides);

}  // namespace ecx::cli
