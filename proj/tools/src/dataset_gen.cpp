#include "dataset_gen.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "ecx/csv.hpp"
#include "ecx/errors.hpp"
#include "ecx/rng.hpp"
#include "ecx/synth.hpp"
#include "ecx/types.hpp"

namespace fs = std::filesystem;

namespace ecx::cli {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void generate_dataset(const DatasetGenSpec& spec) {
    if (spec.n_regions < 4 || spec.n_activities < 4)
        throw DataError("synth dataset: need at least 4 regions and activities");
    if (spec.year_hi < spec.year_lo) throw DataError("synth dataset: empty year range");
    fs::create_directories(spec.out_dir);

    const int nr = spec.n_regions, na = spec.n_activities;
    const int ny = spec.year_hi - spec.year_lo + 1;
    Rng rng(spec.seed);

    // Regions live on a grid; capability blends a smooth spatial gradient
    // with idiosyncratic noise so complexity fields show spatial structure.
    const int rows = std::max(1, static_cast<int>(std::floor(std::sqrt(double(nr)))));
    const int cols = (nr + rows - 1) / rows;
    std::vector<double> capability(nr), pop_base(nr);
    for (int r = 0; r < nr; ++r) {
        const double gi = (r / cols) / std::max(1.0, rows - 1.0);
        const double gj = (r % cols) / std::max(1.0, cols - 1.0);
        capability[r] = 1.4 * (gi - 0.5) + 0.9 * (gj - 0.5) + 0.55 * rng.normal();
        pop_base[r] = std::exp(10.0 + 1.1 * rng.normal() + 0.35 * capability[r]);
    }

    std::vector<double> difficulty(na);
    for (int a = 0; a < na; ++a) difficulty[a] = rng.normal();

    // Time-invariant latent match quality per (region, activity, dataset).
    std::vector<double> match_ind(static_cast<std::size_t>(nr) * na),
        match_exp(static_cast<std::size_t>(nr) * na);
    for (auto& v : match_ind) v = rng.normal();
    for (auto& v : match_exp) v = rng.normal();

    const std::string dir = spec.out_dir + "/";
    {
        csv::Writer ind(dir + "industry.csv"), exp_w(dir + "exports.csv");
        ind.row({"region", "activity", "year", "value"});
        exp_w.row({"region", "activity", "year", "value"});
        // The least difficult activity is always worked in (formal employment
        // never vanishes entirely), so industry has no undefined RCA rows;
        // exports may legitimately be empty for weak regions.
        int easiest = 0;
        for (int a = 1; a < na; ++a)
            if (difficulty[a] < difficulty[easiest]) easiest = a;
        for (int r = 0; r < nr; ++r) {
            const std::string region = synth::region_id(r, nr);
            for (int a = 0; a < na; ++a) {
                const std::string activity = synth::activity_id(a, na);
                const double p_ind =
                    sigmoid(1.3 * (capability[r] - difficulty[a]) + 0.9 * match_ind[r * na + a]);
                const double p_exp =
                    sigmoid(1.1 * (capability[r] - difficulty[a]) + 1.0 * match_exp[r * na + a]);
                const bool active_ind = p_ind > 0.72 || a == easiest;
                const bool active_exp = p_exp > 0.80;
                if (!active_ind && !active_exp) continue;
                double level_ind = active_ind ? pop_base[r] * 1e-4 *
                                                    std::exp(0.8 * rng.normal() -
                                                             0.3 * difficulty[a])
                                              : 0.0;
                double level_exp = active_exp ? pop_base[r] * 3e-5 *
                                                    std::exp(1.0 * rng.normal() -
                                                             0.2 * difficulty[a])
                                              : 0.0;
                for (int t = 0; t < ny; ++t) {
                    const int year = spec.year_lo + t;
                    if (active_ind) {
                        const double v = level_ind * std::exp(0.02 * t + 0.05 * rng.normal());
                        ind.row({region, activity, std::to_string(year),
                                 csv::format_double(v)});
                    }
                    if (active_exp) {
                        const double v = level_exp * std::exp(0.03 * t + 0.08 * rng.normal());
                        exp_w.row({region, activity, std::to_string(year),
                                   csv::format_double(v)});
                    }
                }
            }
        }
    }

    {
        csv::Writer gdp(dir + "gdppc.csv"), pop(dir + "population.csv");
        gdp.row({"region", "year", "value"});
        pop.row({"region", "year", "value"});
        for (int r = 0; r < nr; ++r) {
            const std::string region = synth::region_id(r, nr);
            const double trend = 0.012 + 0.006 * capability[r];
            double shock = 0.0;
            for (int t = 0; t < ny; ++t) {
                const int year = spec.year_lo + t;
                shock = 0.6 * shock + 0.025 * rng.normal();
                const double real =
                    9000.0 * std::exp(0.5 * capability[r] + trend * t + shock);
                const double price = std::pow(1.05, year - 2010);
                gdp.row({region, std::to_string(year), csv::format_double(real * price)});
                pop.row({region, std::to_string(year),
                         csv::format_double(pop_base[r] * std::pow(1.01, t))});
            }
        }
    }

    {
        // Index range always covers the 2010 base year used by the
        // generated config.
        csv::Writer cpi(dir + "price_index.csv");
        cpi.row({"year", "value"});
        for (int year = std::min(spec.year_lo, 2010); year <= std::max(spec.year_hi, 2010);
             ++year)
            cpi.row({std::to_string(year), csv::format_double(std::pow(1.05, year - 2010))});
    }

    {
        // PCI tracks activity difficulty; world shares favor simpler goods.
        csv::Writer pci(dir + "pci.csv"), shares(dir + "shares.csv");
        pci.row({"activity", "year", "pci"});
        shares.row({"activity", "year", "share"});
        std::vector<double> weight(na);
        for (int t = 0; t < ny; ++t) {
            const int year = spec.year_lo + t;
            double total = 0.0;
            for (int a = 0; a < na; ++a) {
                weight[a] = std::exp(-0.5 * difficulty[a] + 0.25 * rng.normal());
                total += weight[a];
            }
            for (int a = 0; a < na; ++a) {
                pci.row({synth::activity_id(a, na), std::to_string(year),
                         csv::format_double(difficulty[a] + 0.15 * rng.normal())});
                shares.row({synth::activity_id(a, na), std::to_string(year),
                            csv::format_double(weight[a] / total)});
            }
        }
    }

    {
        csv::Writer adj(dir + "adjacency.csv");
        adj.row({"region_a", "region_b"});
        for (int r = 0; r < nr; ++r) {
            const int gj = r % cols;
            if (gj + 1 < cols && r + 1 < nr)
                adj.row({synth::region_id(r, nr), synth::region_id(r + 1, nr)});
            if (r + cols < nr)
                adj.row({synth::region_id(r, nr), synth::region_id(r + cols, nr)});
        }
    }

    {
        std::ofstream cfg(dir + "config.ini", std::ios::binary);
        cfg << "# generated by 'ecx synth dataset' (seed " << spec.seed << ")\n";
        cfg << "[io]\noutput_dir = " << spec.out_dir << "/out\n\n";
        cfg << "[data]\n";
        cfg << "industry_intensity = " << dir << "industry.csv\n";
        cfg << "export_intensity = " << dir << "exports.csv\n";
        cfg << "gdppc = " << dir << "gdppc.csv\n";
        cfg << "population = " << dir << "population.csv\n";
        cfg << "price_index = " << dir << "price_index.csv\n";
        cfg << "adjacency = " << dir << "adjacency.csv\n";
        cfg << "pci = " << dir << "pci.csv\n";
        cfg << "export_shares = " << dir << "shares.csv\n\n";
        cfg << "[complexity]\nyears = " << spec.year_lo << "-" << spec.year_hi << "\n";
        cfg << "rca_threshold = 1.0\ndatasets = industry,export\n\n";
        cfg << "[spatial]\nindicators = IndECI,ECI\n\n";
        cfg << "[regress]\nhorizons = 2,3,4\nbase_year = 2010\n";
    }
}

}  // namespace ecx::cli
