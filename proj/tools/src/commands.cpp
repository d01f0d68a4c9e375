#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "ecx/complexity.hpp"
#include "ecx/csv.hpp"
#include "ecx/econometrics.hpp"
#include "ecx/errors.hpp"
#include "ecx/ingest.hpp"
#include "ecx/rca.hpp"
#include "ecx/relatedness.hpp"
#include "ecx/spatial.hpp"
#include "ecx/stats.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace ecx::cli {

namespace {

bool log_enabled() {
    const char* v = std::getenv("ECX_LOG");
    return !(v && std::string(v) == "quiet");
}

void log(const std::string& msg) {
    if (log_enabled()) std::cerr << "[ecx] " << msg << "\n";
}

std::string out_path(const PipelineConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

std::string fmt(double v) { return csv::format_double(v); }

std::string region_score_name(Dataset d) {
    return d == Dataset::industry ? "IndECI" : "ECI";
}
std::string activity_score_name(Dataset d) { return d == Dataset::industry ? "ICI" : "PCI"; }

// Everything the pipeline stages share; loaded lazily and memoized so `all`
// computes each piece once.
struct Workspace {
    const PipelineConfig& cfg;
    explicit Workspace(const PipelineConfig& c) : cfg(c) {}

    std::optional<ActivityPanel> industry_panel, export_panel;
    std::optional<std::map<std::pair<std::string, int>, double>> pci_map, shares_map;

    struct YearResult {
        RcaMatrix rca;
        SpecializationMatrix m;
        ComplexityResult complexity;
    };
    std::map<Dataset, std::map<int, YearResult>> results;

    const ActivityPanel& panel(Dataset d) {
        auto& slot = d == Dataset::industry ? industry_panel : export_panel;
        if (!slot) {
            const std::string path =
                d == Dataset::industry ? cfg.industry_intensity : cfg.export_intensity;
            std::optional<std::map<std::string, std::string>> cw;
            if (!cfg.crosswalk.empty()) cw = csv::read_crosswalk(cfg.crosswalk);
            log("loading " + dataset_name(d) + " intensity from " + path);
            slot = load_intensity(path, cw);
        }
        return *slot;
    }

    const std::map<std::pair<std::string, int>, double>& pci() {
        if (!pci_map) pci_map = csv::read_activity_year(cfg.pci, "pci");
        return *pci_map;
    }

    Baseline baseline(Dataset d) {
        if (d == Dataset::exports && !cfg.export_shares.empty()) {
            if (!shares_map) shares_map = csv::read_activity_year(cfg.export_shares, "share");
            return Baseline::external(*shares_map);
        }
        return Baseline::internal();
    }

    std::map<std::string, double> pci_for_year(int year) {
        std::map<std::string, double> out;
        for (const auto& [key, v] : pci())
            if (key.second == year) out[key.first] = v;
        return out;
    }

    // rca -> binarize -> complexity for every configured year present in the
    // panel. Industry scores come from the eigenvector solution; export
    // scores average the externally supplied PCI.
    const std::map<int, YearResult>& dataset_results(Dataset d) {
        auto it = results.find(d);
        if (it != results.end()) return it->second;
        auto& out = results[d];
        const ActivityPanel& p = panel(d);
        for (int year = cfg.year_lo; year <= cfg.year_hi; ++year) {
            if (!p.year_index(year)) continue;
            log("complexity " + dataset_name(d) + " " + std::to_string(year));
            try {
                YearResult yr{rca(p, baseline(d), year), {}, {}};
                yr.m = binarize(yr.rca, cfg.rca_threshold);
                if (d == Dataset::industry) {
                    yr.complexity = eigen_complexity(yr.m);
                } else {
                    yr.complexity = eci_from_external(yr.m, pci_for_year(year));
                }
                out.emplace(year, std::move(yr));
            } catch (const NumericalError& e) {
                throw NumericalError(dataset_name(d) + " " + std::to_string(year) + ": " +
                                     e.what());
            } catch (const DataError& e) {
                throw DataError(dataset_name(d) + " " + std::to_string(year) + ": " + e.what());
            }
        }
        if (out.empty())
            throw DataError(dataset_name(d) + " panel has no data in the configured years " +
                            std::to_string(cfg.year_lo) + "-" + std::to_string(cfg.year_hi));
        return out;
    }
};

// --- complexity stage --------------------------------------------------------

void stage_complexity(Workspace& ws, Manifest& manifest) {
    const auto& cfg = ws.cfg;
    csv::Writer indicators(out_path(cfg, "indicators.csv"));
    indicators.row({"region", "year", "indicator", "value"});
    csv::Writer activity_ind(out_path(cfg, "activity_indicators.csv"));
    activity_ind.row({"activity", "year", "indicator", "value"});
    csv::Writer drops(out_path(cfg, "complexity_drops.csv"));
    drops.row({"region", "year", "reason"});
    csv::Writer adrops(out_path(cfg, "activity_drops.csv"));
    adrops.row({"activity", "year", "reason"});

    for (Dataset d : cfg.datasets) {
        const auto& per_year = ws.dataset_results(d);
        for (const auto& [year, yr] : per_year) {
            for (const auto& [region, score] : yr.complexity.region_scores)
                indicators.row({region, std::to_string(year), region_score_name(d), fmt(score)});
            for (const auto& [activity, score] : yr.complexity.activity_scores)
                activity_ind.row(
                    {activity, std::to_string(year), activity_score_name(d), fmt(score)});
            for (const auto& [region, reason] : yr.complexity.dropped_regions)
                drops.row({region, std::to_string(year), region_score_name(d) + ": " + reason});
            for (const auto& [activity, reason] : yr.complexity.dropped_activities)
                adrops.row(
                    {activity, std::to_string(year), activity_score_name(d) + ": " + reason});
        }
    }
    manifest.add_input(cfg.config_path);
    for (Dataset d : cfg.datasets)
        manifest.add_input(d == Dataset::industry ? cfg.industry_intensity
                                                  : cfg.export_intensity);
    if (cfg.has_dataset(Dataset::exports)) manifest.add_input(cfg.pci);
    if (!cfg.crosswalk.empty()) manifest.add_input(cfg.crosswalk);
    if (!cfg.export_shares.empty() && cfg.has_dataset(Dataset::exports))
        manifest.add_input(cfg.export_shares);
}

void finish_complexity_outputs(const PipelineConfig& cfg, Manifest& manifest) {
    for (const char* name : {"indicators.csv", "activity_indicators.csv",
                             "complexity_drops.csv", "activity_drops.csv"})
        manifest.add_output(out_path(cfg, name), name);
}

// --- relatedness stage -------------------------------------------------------

void stage_relatedness(Workspace& ws, Manifest& manifest) {
    const auto& cfg = ws.cfg;
    for (Dataset d : cfg.datasets) {
        const std::string suffix = dataset_name(d);
        csv::Writer phi_w(out_path(cfg, "proximity_" + suffix + ".csv"));
        phi_w.row({"activity_a", "activity_b", "year", "phi"});
        csv::Writer omega_w(out_path(cfg, "density_" + suffix + ".csv"));
        omega_w.row({"region", "activity", "year", "omega"});
        csv::Writer close_w(out_path(cfg, "closeness_" + suffix + ".csv"));
        close_w.row({"region", "year", "closeness"});
        csv::Writer close_drop_w(out_path(cfg, "closeness_undefined_" + suffix + ".csv"));
        close_drop_w.row({"region", "year", "reason"});
        csv::Writer scurve_w(out_path(cfg, "scurve_" + suffix + ".csv"));
        scurve_w.row({"region", "year", "complexity", "closeness"});

        for (const auto& [year, yr] : ws.dataset_results(d)) {
            log("relatedness " + suffix + " " + std::to_string(year));
            const auto phi = proximity(yr.m);
            const auto omega = density(yr.m, phi);
            std::map<std::string, double> activity_complexity;
            if (d == Dataset::industry) {
                activity_complexity = yr.complexity.activity_scores;
            } else {
                activity_complexity = ws.pci_for_year(year);
            }
            const auto closeness = closeness_to_complexity(yr.m, omega, activity_complexity);

            const std::string ys = std::to_string(year);
            const auto& acts = phi.activities;
            for (std::size_t i = 0; i < acts.size(); ++i)
                for (std::size_t j = i; j < acts.size(); ++j)
                    phi_w.row({acts[i], acts[j], ys,
                               fmt(phi.phi(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j)))});
            for (std::size_t r = 0; r < omega.regions.size(); ++r)
                for (std::size_t a = 0; a < acts.size(); ++a) {
                    if (!omega.activity_defined[a]) continue;
                    omega_w.row({omega.regions[r], acts[a], ys,
                                 fmt(omega.omega(static_cast<Eigen::Index>(r),
                                                 static_cast<Eigen::Index>(a)))});
                }
            for (const auto& [region, value] : closeness.value)
                close_w.row({region, ys, fmt(value)});
            for (const auto& [region, reason] : closeness.undefined)
                close_drop_w.row({region, ys, reason});
            for (const auto& [region, value] : closeness.value) {
                auto it = yr.complexity.region_scores.find(region);
                if (it != yr.complexity.region_scores.end())
                    scurve_w.row({region, ys, fmt(it->second), fmt(value)});
            }
        }
    }
}

void finish_relatedness_outputs(const PipelineConfig& cfg, Manifest& manifest) {
    for (Dataset d : cfg.datasets) {
        const std::string suffix = dataset_name(d);
        for (const std::string base : {"proximity_", "density_", "closeness_",
                                       "closeness_undefined_", "scurve_"}) {
            const std::string name = base + suffix + ".csv";
            manifest.add_output(out_path(cfg, name), name);
        }
    }
}

// --- spatial stage (consumes indicator CSVs) ---------------------------------

std::map<std::string, IndicatorSeries> read_indicator_table(const std::string& path) {
    std::map<std::string, IndicatorSeries> out;
    csv::for_each_row(path, {"region", "year", "indicator", "value"},
                      [&](std::size_t line_no, const std::vector<std::string>& f) {
                          auto [it, inserted] = out.try_emplace(f[2], f[2], "");
                          it->second.set(f[0], csv::parse_year(f[1], line_no),
                                         csv::parse_double(f[3], line_no));
                      });
    return out;
}

void stage_spatial(const PipelineConfig& cfg, Manifest& manifest) {
    const std::string indicators_path = out_path(cfg, "indicators.csv");
    if (!fs::exists(indicators_path))
        throw DataError("spatial: " + indicators_path +
                        " not found; run the complexity command first");
    const auto table = read_indicator_table(indicators_path);
    const RegionGraph graph = csv::read_adjacency(cfg.adjacency);

    csv::Writer series_w(out_path(cfg, "spatial_series.csv"));
    series_w.row({"year", "indicator", "morans_i", "skewness"});
    csv::Writer navg_w(out_path(cfg, "neighbor_avg.csv"));
    navg_w.row({"region", "year", "indicator", "neighbor_avg"});
    csv::Writer excl_w(out_path(cfg, "spatial_exclusions.csv"));
    excl_w.row({"year", "indicator", "n_excluded"});

    for (const auto& name : cfg.spatial_indicators) {
        auto it = table.find(name);
        if (it == table.end())
            throw DataError("spatial: indicator '" + name + "' not present in " +
                            indicators_path);
        const IndicatorSeries& series = it->second;
        for (int year : series.year_universe()) {
            std::map<std::string, double> values;
            std::vector<double> all_values;
            for (const auto& [key, v] : series.values())
                if (key.second == year) {
                    values[key.first] = v;
                    all_values.push_back(v);
                }

            // Regions without a score (and their incident edges) are
            // excluded from the autocorrelation, and the count is logged.
            std::vector<std::string> with_value;
            int excluded = 0;
            for (const auto& region : graph.regions()) {
                if (values.count(region))
                    with_value.push_back(region);
                else
                    ++excluded;
            }
            const RegionGraph sub = graph.subgraph(with_value);
            std::map<std::string, double> sub_values;
            for (const auto& r : with_value) sub_values[r] = values.at(r);

            double moran = 0.0, skew = 0.0;
            try {
                moran = morans_i(sub_values, sub);
                skew = stats::skewness(all_values);
            } catch (const NumericalError& e) {
                throw NumericalError("spatial: year " + std::to_string(year) + ", indicator " +
                                     name + ": " + e.what());
            } catch (const DataError& e) {
                throw DataError("spatial: year " + std::to_string(year) + ", indicator " + name +
                                ": " + e.what());
            }
            series_w.row({std::to_string(year), name, fmt(moran), fmt(skew)});
            excl_w.row({std::to_string(year), name, std::to_string(excluded)});

            const auto navg = neighbor_average(values, graph, cfg.neighbor_subset_average);
            for (const auto& [region, v] : navg.value)
                navg_w.row({region, std::to_string(year), name, fmt(v)});
        }
    }
    manifest.add_input(indicators_path);
    manifest.add_input(cfg.adjacency);
}

void finish_spatial_outputs(const PipelineConfig& cfg, Manifest& manifest) {
    for (const char* name : {"spatial_series.csv", "neighbor_avg.csv", "spatial_exclusions.csv"})
        manifest.add_output(out_path(cfg, name), name);
}

// --- regression stage --------------------------------------------------------

std::string stars(double estimate, double std_error) {
    if (std_error <= 0.0) return "";
    const double p = stats::normal_two_sided_p(estimate / std_error);
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

struct SpecDef {
    int column;  // Table-3 style column number 1..8
    std::vector<std::string> extra_regressors;
};

const std::vector<SpecDef>& table3_specs() {
    static const std::vector<SpecDef> specs = {
        {1, {}},
        {2, {"log:gdppc_real", "log:population"}},
        {3, {"IndECI", "log:gdppc_real", "log:population"}},
        {4, {"IndECI_N", "log:gdppc_real", "log:population"}},
        {5, {"IndECI", "IndECI_N", "log:gdppc_real", "log:population"}},
        {6, {"ECI", "log:gdppc_real", "log:population"}},
        {7, {"ECI_N", "log:gdppc_real", "log:population"}},
        {8, {"ECI", "ECI_N", "log:gdppc_real", "log:population"}},
    };
    return specs;
}

void stage_regress(const PipelineConfig& cfg, Manifest& manifest) {
    const std::string indicators_path = out_path(cfg, "indicators.csv");
    const std::string navg_path = out_path(cfg, "neighbor_avg.csv");
    for (const auto& p : {indicators_path, navg_path})
        if (!fs::exists(p))
            throw DataError("regress: " + p +
                            " not found; run the complexity and spatial commands first");

    // Covariate series: complexity scores, their neighbor averages, controls.
    std::map<std::string, IndicatorSeries> series;
    for (auto& [name, s] : read_indicator_table(indicators_path)) series[name] = s;
    csv::for_each_row(navg_path, {"region", "year", "indicator", "neighbor_avg"},
                      [&](std::size_t line_no, const std::vector<std::string>& f) {
                          const std::string name = f[2] + "_N";
                          auto [it, inserted] = series.try_emplace(name, name, "");
                          it->second.set(f[0], csv::parse_year(f[1], line_no),
                                         csv::parse_double(f[3], line_no));
                      });

    IndicatorSeries gdppc = csv::read_indicator(cfg.gdppc, "gdppc", "currency");
    if (!cfg.price_index.empty()) {
        const auto index = csv::read_year_value(cfg.price_index);
        gdppc = deflate(gdppc, index, cfg.base_year);
    }
    gdppc = gdppc.renamed("gdppc_real");
    series["population"] = csv::read_indicator(cfg.population, "population", "people");

    csv::Writer coef_w(out_path(cfg, "regression_coefficients.csv"));
    coef_w.row({"spec_id", "term", "estimate", "std_error", "stars"});
    csv::Writer diag_w(out_path(cfg, "regression_diagnostics.csv"));
    diag_w.row({"spec_id", "n_obs", "n_instruments", "sargan_p", "ar1_p", "ar2_p"});
    csv::Writer del_w(out_path(cfg, "regression_deletions.csv"));
    del_w.row({"spec_id", "region", "year", "missing"});
    csv::Writer vif_w(out_path(cfg, "regression_vif.csv"));
    vif_w.row({"spec_id", "term", "vif"});
    csv::Writer fig4_w(out_path(cfg, "figure4_margins.csv"));
    fig4_w.row({"horizon", "term", "estimate", "ci_low", "ci_high"});

    GmmOptions options;
    options.two_step = cfg.two_step;
    options.collapse_instruments = cfg.collapse_instruments;
    options.max_lag_depth = cfg.max_lag_depth;
    options.predetermined_max_lag = cfg.predetermined_max_lag;

    for (int h : cfg.horizons) {
        const IndicatorSeries growth = growth_rate(gdppc, h);
        std::map<std::string, IndicatorSeries> local = series;
        local["gdppc_real"] = gdppc;
        local[growth.name()] = growth;

        for (const auto& def : table3_specs()) {
            const std::string spec_id = "h" + std::to_string(h) + "_c" + std::to_string(def.column);
            PanelSpec pspec;
            pspec.dependent = growth.name();
            pspec.horizon = h;
            pspec.include_lagged_dependent = true;
            pspec.lag_mode = cfg.lag_mode == "one_year" ? LagMode::one_year
                                                        : LagMode::non_overlapping;
            for (const auto& term : def.extra_regressors) {
                std::string name = term;
                if (name.rfind("log:", 0) == 0) {
                    name = name.substr(4);
                    pspec.log_transform.push_back(name);
                }
                pspec.regressors.push_back(name);
                if (!local.count(name))
                    throw ConfigError("regress: specification " + spec_id +
                                      " references indicator '" + name +
                                      "' which is not available");
            }

            std::vector<const IndicatorSeries*> inputs;
            for (const auto& [name, s] : local) inputs.push_back(&s);

            log("estimating " + spec_id);
            RegressionTable table;
            try {
                table = build_panel(inputs, pspec);
            } catch (const DataError& e) {
                throw DataError("regress: " + spec_id + ": " + e.what() +
                                " (see regression_deletions.csv)");
            }
            for (const auto& d : table.deletion_log)
                del_w.row({spec_id, d.region, std::to_string(d.year), d.missing});

            const PanelModelResult res = system_gmm(table, pspec, options);
            for (const auto& c : res.coefficients) {
                coef_w.row({spec_id, c.name, fmt(c.estimate), fmt(c.std_error),
                            stars(c.estimate, c.std_error)});
            }
            diag_w.row({spec_id, std::to_string(res.n_obs), std::to_string(res.n_instruments),
                        res.sargan ? fmt(res.sargan->p_value) : "NA",
                        res.ar1_test ? fmt(res.ar1_test->p_value) : "NA",
                        res.ar2_test ? fmt(res.ar2_test->p_value) : "NA"});

            if (pspec.regressors.size() >= 2) {
                std::vector<std::string> cols;
                for (const auto& r : pspec.regressors) {
                    const bool logged =
                        std::find(pspec.log_transform.begin(), pspec.log_transform.end(), r) !=
                        pspec.log_transform.end();
                    cols.push_back(logged ? "log_" + r : r);
                }
                for (const auto& [term, value] : vif(table, cols))
                    vif_w.row({spec_id, term,
                               std::isinf(value) ? "inf" : fmt(value)});
            }

            // Figure-4 style marginal effects: complexity terms from the
            // combined specifications (columns 5 and 8).
            if (def.column == 5 || def.column == 8) {
                for (const auto& c : res.coefficients) {
                    if (c.name == "IndECI" || c.name == "IndECI_N" || c.name == "ECI" ||
                        c.name == "ECI_N") {
                        fig4_w.row({std::to_string(h), c.name, fmt(c.estimate),
                                    fmt(c.estimate - 1.959963984540054 * c.std_error),
                                    fmt(c.estimate + 1.959963984540054 * c.std_error)});
                    }
                }
            }
        }
    }
    manifest.add_input(indicators_path);
    manifest.add_input(navg_path);
    manifest.add_input(cfg.gdppc);
    manifest.add_input(cfg.population);
    if (!cfg.price_index.empty()) manifest.add_input(cfg.price_index);
}

void finish_regress_outputs(const PipelineConfig& cfg, Manifest& manifest) {
    for (const char* name :
         {"regression_coefficients.csv", "regression_diagnostics.csv",
          "regression_deletions.csv", "regression_vif.csv", "figure4_margins.csv"})
        manifest.add_output(out_path(cfg, name), name);
}

// --- summary tables (Table 1/2 shapes) ---------------------------------------

void stage_tables(Workspace& ws) {
    const auto& cfg = ws.cfg;
    csv::Writer t1(out_path(cfg, "table1_activities.csv"));
    t1.row({"dataset", "year", "activity", "score", "top_rca_region", "top_rca_value"});
    csv::Writer t2(out_path(cfg, "table2_regions.csv"));
    t2.row({"dataset", "year", "region", "score", "rank"});

    for (Dataset d : cfg.datasets) {
        const auto& per_year = ws.dataset_results(d);
        const int year = per_year.rbegin()->first;  // latest computed year
        const auto& yr = per_year.rbegin()->second;

        // Activity complexity ranking with the region of highest RCA.
        std::map<std::string, double> activity_scores =
            d == Dataset::industry ? yr.complexity.activity_scores : ws.pci_for_year(year);
        std::vector<std::pair<std::string, double>> ranked(activity_scores.begin(),
                                                           activity_scores.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        for (const auto& [activity, score] : ranked) {
            std::string top_region = "NA";
            double top_value = 0.0;
            const auto ai =
                std::find(yr.rca.activities.begin(), yr.rca.activities.end(), activity);
            if (ai != yr.rca.activities.end()) {
                const Eigen::Index a = ai - yr.rca.activities.begin();
                for (std::size_t r = 0; r < yr.rca.regions.size(); ++r) {
                    if (!yr.rca.row_defined[r]) continue;
                    const double v = yr.rca.values(static_cast<Eigen::Index>(r), a);
                    if (v > top_value) {
                        top_value = v;
                        top_region = yr.rca.regions[r];
                    }
                }
            }
            t1.row({dataset_name(d), std::to_string(year), activity, fmt(score), top_region,
                    fmt(top_value)});
        }

        std::vector<std::pair<std::string, double>> regions(yr.complexity.region_scores.begin(),
                                                            yr.complexity.region_scores.end());
        std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        int rank = 1;
        for (const auto& [region, score] : regions)
            t2.row({dataset_name(d), std::to_string(year), region, fmt(score),
                    std::to_string(rank++)});
    }
}

void finish_tables_outputs(const PipelineConfig& cfg, Manifest& manifest) {
    manifest.add_output(out_path(cfg, "table1_activities.csv"), "table1_activities.csv");
    manifest.add_output(out_path(cfg, "table2_regions.csv"), "table2_regions.csv");
}

}  // namespace

void run_ingest(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    Manifest manifest("ingest", cfg.config_hash);
    manifest.add_input(cfg.config_path);
    Workspace ws(cfg);
    for (Dataset d : cfg.datasets) {
        const std::string name =
            d == Dataset::industry ? "industry_panel.csv" : "export_panel.csv";
        csv::write_intensity(out_path(cfg, name), ws.panel(d));
        manifest.add_input(d == Dataset::industry ? cfg.industry_intensity
                                                  : cfg.export_intensity);
        manifest.add_output(out_path(cfg, name), name);
    }
    if (!cfg.crosswalk.empty()) manifest.add_input(cfg.crosswalk);

    IndicatorSeries gdppc = csv::read_indicator(cfg.gdppc, "gdppc", "currency");
    manifest.add_input(cfg.gdppc);
    if (!cfg.price_index.empty()) {
        gdppc = deflate(gdppc, csv::read_year_value(cfg.price_index), cfg.base_year);
        manifest.add_input(cfg.price_index);
    }
    csv::write_indicator(out_path(cfg, "gdppc_real.csv"), gdppc);
    manifest.add_output(out_path(cfg, "gdppc_real.csv"), "gdppc_real.csv");
    manifest.write(out_path(cfg, "manifest.txt"));
}

void run_complexity(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    Manifest manifest("complexity", cfg.config_hash);
    Workspace ws(cfg);
    stage_complexity(ws, manifest);
    finish_complexity_outputs(cfg, manifest);
    manifest.write(out_path(cfg, "manifest.txt"));
}

void run_relatedness(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    Manifest manifest("relatedness", cfg.config_hash);
    manifest.add_input(cfg.config_path);
    Workspace ws(cfg);
    stage_relatedness(ws, manifest);
    finish_relatedness_outputs(cfg, manifest);
    manifest.write(out_path(cfg, "manifest.txt"));
}

void run_spatial(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    Manifest manifest("spatial", cfg.config_hash);
    manifest.add_input(cfg.config_path);
    stage_spatial(cfg, manifest);
    finish_spatial_outputs(cfg, manifest);
    manifest.write(out_path(cfg, "manifest.txt"));
}

void run_regress(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    Manifest manifest("regress", cfg.config_hash);
    manifest.add_input(cfg.config_path);
    stage_regress(cfg, manifest);
    finish_regress_outputs(cfg, manifest);
    manifest.write(out_path(cfg, "manifest.txt"));
}

void run_all(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    Manifest manifest("all", cfg.config_hash);
    Workspace ws(cfg);
    stage_complexity(ws, manifest);
    finish_complexity_outputs(cfg, manifest);
    stage_relatedness(ws, manifest);
    finish_relatedness_outputs(cfg, manifest);
    stage_spatial(cfg, manifest);
    finish_spatial_outputs(cfg, manifest);
    stage_regress(cfg, manifest);
    finish_regress_outputs(cfg, manifest);
    stage_tables(ws);
    finish_tables_outputs(cfg, manifest);
    manifest.write(out_path(cfg, "manifest.txt"));
}

}  // namespace ecx::cli
