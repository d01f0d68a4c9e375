#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecx/csv.hpp"
#include "ecx/errors.hpp"

namespace fs = std::filesystem;

namespace ecx::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Ini Ini::parse_string(const std::string& text, const std::string& origin) {
    Ini ini;
    std::istringstream in(text);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        ini.values_[section][key] = value;
    }
    return ini;
}

Ini Ini::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_string(text, path);
}

std::optional<std::string> Ini::get(const std::string& section, const std::string& key) const {
    consumed_[section + "." + key] = true;
    auto sit = values_.find(section);
    if (sit == values_.end()) return std::nullopt;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return std::nullopt;
    return kit->second;
}

void Ini::set(const std::string& section, const std::string& key, const std::string& value) {
    values_[section][key] = value;
}

std::vector<std::string> Ini::unknown_keys() const {
    std::vector<std::string> out;
    for (const auto& [section, kv] : values_)
        for (const auto& [key, value] : kv)
            if (!consumed_.count(section + "." + key)) out.push_back(section + "." + key);
    return out;
}

std::string Ini::canonical() const {
    std::string out;
    for (const auto& [section, kv] : values_) {
        out += "[" + section + "]\n";
        for (const auto& [key, value] : kv) out += key + "=" + value + "\n";
    }
    return out;
}

std::string dataset_name(Dataset d) { return d == Dataset::industry ? "industry" : "export"; }

bool PipelineConfig::has_dataset(Dataset d) const {
    return std::find(datasets.begin(), datasets.end(), d) != datasets.end();
}

namespace {

struct Validator {
    std::vector<std::string> errors;

    void fail(const std::string& msg) { errors.push_back(msg); }

    int parse_int(const std::string& value, const std::string& what) {
        int v = 0;
        auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || p != value.data() + value.size()) {
            fail(what + ": not an integer: '" + value + "'");
            return 0;
        }
        return v;
    }

    double parse_real(const std::string& value, const std::string& what) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || p != value.data() + value.size()) {
            fail(what + ": not a number: '" + value + "'");
            return 0.0;
        }
        return v;
    }

    bool parse_bool(const std::string& value, const std::string& what) {
        if (value == "true" || value == "1" || value == "yes") return true;
        if (value == "false" || value == "0" || value == "no") return false;
        fail(what + ": expected true/false, got '" + value + "'");
        return false;
    }

    std::vector<std::string> split_list(const std::string& value) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : value) {
            if (c == ',') {
                if (!trim(cur).empty()) out.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) out.push_back(trim(cur));
        return out;
    }

    void require_file(const std::string& path, const std::string& what) {
        if (path.empty()) {
            fail(what + ": required but not configured");
            return;
        }
        if (!fs::exists(path)) fail(what + ": file not found: " + path);
    }

    void optional_file(const std::string& path, const std::string& what) {
        if (!path.empty() && !fs::exists(path)) fail(what + ": file not found: " + path);
    }
};

}  // namespace

PipelineConfig load_config(const std::string& path, const std::string& command,
                           const CliOverrides& overrides) {
    Ini ini = Ini::parse_file(path);
    if (overrides.output_dir) ini.set("io", "output_dir", *overrides.output_dir);
    if (overrides.years) ini.set("complexity", "years", *overrides.years);
    if (overrides.horizons) ini.set("regress", "horizons", *overrides.horizons);
    if (overrides.rca_threshold)
        ini.set("complexity", "rca_threshold", csv::format_double(*overrides.rca_threshold));
    if (overrides.two_step) ini.set("regress", "two_step", *overrides.two_step ? "true" : "false");
    if (overrides.datasets) ini.set("complexity", "datasets", *overrides.datasets);

    PipelineConfig cfg;
    cfg.config_path = path;
    Validator v;

    cfg.output_dir = ini.get("io", "output_dir").value_or("");
    if (cfg.output_dir.empty()) v.fail("io.output_dir: required");

    cfg.industry_intensity = ini.get("data", "industry_intensity").value_or("");
    cfg.export_intensity = ini.get("data", "export_intensity").value_or("");
    cfg.crosswalk = ini.get("data", "crosswalk").value_or("");
    cfg.gdppc = ini.get("data", "gdppc").value_or("");
    cfg.population = ini.get("data", "population").value_or("");
    cfg.price_index = ini.get("data", "price_index").value_or("");
    cfg.adjacency = ini.get("data", "adjacency").value_or("");
    cfg.pci = ini.get("data", "pci").value_or("");
    cfg.export_shares = ini.get("data", "export_shares").value_or("");

    const std::string years = ini.get("complexity", "years").value_or("");
    if (years.empty()) {
        v.fail("complexity.years: required (e.g. 2003-2019)");
    } else {
        const auto dash = years.find('-');
        if (dash == std::string::npos) {
            cfg.year_lo = cfg.year_hi = v.parse_int(years, "complexity.years");
        } else {
            cfg.year_lo = v.parse_int(years.substr(0, dash), "complexity.years");
            cfg.year_hi = v.parse_int(years.substr(dash + 1), "complexity.years");
        }
        if (cfg.year_hi < cfg.year_lo) v.fail("complexity.years: end before start");
    }
    if (auto t = ini.get("complexity", "rca_threshold")) {
        cfg.rca_threshold = v.parse_real(*t, "complexity.rca_threshold");
        if (cfg.rca_threshold <= 0.0) v.fail("complexity.rca_threshold: must be positive");
    }
    for (const auto& name :
         v.split_list(ini.get("complexity", "datasets").value_or("industry,export"))) {
        if (name == "industry")
            cfg.datasets.push_back(Dataset::industry);
        else if (name == "export")
            cfg.datasets.push_back(Dataset::exports);
        else
            v.fail("complexity.datasets: unknown dataset '" + name + "'");
    }
    if (cfg.datasets.empty()) v.fail("complexity.datasets: none selected");

    for (const auto& name :
         v.split_list(ini.get("spatial", "indicators").value_or("IndECI,ECI")))
        cfg.spatial_indicators.push_back(name);
    if (auto b = ini.get("spatial", "neighbor_subset_average"))
        cfg.neighbor_subset_average = v.parse_bool(*b, "spatial.neighbor_subset_average");

    for (const auto& h : v.split_list(ini.get("regress", "horizons").value_or("3"))) {
        const int hv = v.parse_int(h, "regress.horizons");
        if (hv < 1) v.fail("regress.horizons: must be >= 1");
        cfg.horizons.push_back(hv);
    }
    if (auto b = ini.get("regress", "base_year"))
        cfg.base_year = v.parse_int(*b, "regress.base_year");
    if (auto b = ini.get("regress", "two_step"))
        cfg.two_step = v.parse_bool(*b, "regress.two_step");
    if (auto b = ini.get("regress", "collapse_instruments"))
        cfg.collapse_instruments = v.parse_bool(*b, "regress.collapse_instruments");
    if (auto b = ini.get("regress", "max_lag_depth")) {
        cfg.max_lag_depth = v.parse_int(*b, "regress.max_lag_depth");
        if (cfg.max_lag_depth < 2) v.fail("regress.max_lag_depth: must be >= 2");
    }
    if (auto b = ini.get("regress", "predetermined_max_lag")) {
        cfg.predetermined_max_lag = v.parse_int(*b, "regress.predetermined_max_lag");
        if (cfg.predetermined_max_lag < 1) v.fail("regress.predetermined_max_lag: must be >= 1");
    }
    if (auto m = ini.get("regress", "lag_mode")) {
        cfg.lag_mode = *m;
        if (cfg.lag_mode != "non_overlapping" && cfg.lag_mode != "one_year")
            v.fail("regress.lag_mode: expected non_overlapping or one_year");
    }

    // Per-command input requirements.
    const bool needs_intensity =
        command == "ingest" || command == "complexity" || command == "relatedness" ||
        command == "all";
    if (needs_intensity) {
        if (cfg.has_dataset(Dataset::industry))
            v.require_file(cfg.industry_intensity, "data.industry_intensity");
        if (cfg.has_dataset(Dataset::exports)) {
            v.require_file(cfg.export_intensity, "data.export_intensity");
            if (command != "ingest")
                v.require_file(cfg.pci, "data.pci (required for the export dataset)");
        }
        v.optional_file(cfg.crosswalk, "data.crosswalk");
        v.optional_file(cfg.export_shares, "data.export_shares");
    }
    if (command == "ingest" || command == "regress" || command == "all") {
        v.require_file(cfg.gdppc, "data.gdppc");
        v.require_file(cfg.population, "data.population");
        v.optional_file(cfg.price_index, "data.price_index");
    }
    if (command == "spatial" || command == "regress" || command == "all")
        v.require_file(cfg.adjacency, "data.adjacency");

    for (const auto& key : ini.unknown_keys()) v.fail("unknown config key: " + key);

    if (!v.errors.empty()) {
        std::string msg = "configuration invalid (" + std::to_string(v.errors.size()) +
                          " problem" + (v.errors.size() > 1 ? "s" : "") + "):";
        for (const auto& e : v.errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }

    cfg.config_hash = csv::hex64(csv::fnv1a64(ini.canonical()));
    return cfg;
}

}  // namespace ecx::cli
