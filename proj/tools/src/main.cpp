#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "dataset_gen.hpp"
#include "ecx/csv.hpp"
#include "ecx/econometrics.hpp"
#include "ecx/errors.hpp"
#include "ecx/synth.hpp"
#include "ecx/types.hpp"

using namespace ecx;

namespace {

// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.
constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;
constexpr int kNumericalExit = 4;

struct PipelineArgs {
    std::string config_path;
    cli::CliOverrides overrides;
};

void add_pipeline_options(CLI::App* sub, PipelineArgs& args) {
    sub->add_option("-c,--config", args.config_path, "pipeline configuration file (INI)")
        ->required();
    sub->add_option("--output-dir", args.overrides.output_dir,
                    "override io.output_dir from the config");
    sub->add_option("--years", args.overrides.years, "override complexity.years (e.g. 2003-2019)");
    sub->add_option("--horizons", args.overrides.horizons, "override regress.horizons");
    sub->add_option("--rca-threshold", args.overrides.rca_threshold,
                    "override complexity.rca_threshold");
    sub->add_option("--datasets", args.overrides.datasets,
                    "override complexity.datasets (industry,export)");
    sub->add_flag_callback(
        "--two-step", [&args] { args.overrides.two_step = true; },
        "use two-step system GMM");
}

struct SynthMatrixArgs {
    int regions = 20;
    int activities = 25;
    std::string model = "random";
    double density = 0.3;
    int blocks = 2;
    int year = 2010;
    std::uint64_t seed = 1;
    std::string out;
};

struct SynthGraphArgs {
    std::string model = "grid";
    int n = 4;
    int rows = 2, cols = 2;
    std::uint64_t seed = 0;
    std::string out;
};

struct SynthPanelArgs {
    int n = 500;
    int t = 8;
    double rho = 0.5, beta = 1.0, sigma_mu = 1.0, sigma_eps = 1.0, ar_eps = 0.0;
    std::uint64_t seed = 1;
    std::string out_dir;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ecx: regional economic complexity and growth pipeline"};
    app.require_subcommand(1);

    PipelineArgs ingest_args, complexity_args, relatedness_args, spatial_args, regress_args,
        all_args;
    add_pipeline_options(app.add_subcommand("ingest", "parse, aggregate, and deflate inputs"),
                         ingest_args);
    add_pipeline_options(
        app.add_subcommand("complexity", "RCA, specialization matrices, IndECI/ICI and ECI"),
        complexity_args);
    add_pipeline_options(
        app.add_subcommand("relatedness", "proximity, density, closeness, S-curve tables"),
        relatedness_args);
    add_pipeline_options(
        app.add_subcommand("spatial", "Moran's I, skewness, neighbor-average covariates"),
        spatial_args);
    add_pipeline_options(
        app.add_subcommand("regress", "growth panel and system-GMM estimation"), regress_args);
    add_pipeline_options(app.add_subcommand("all", "full pipeline plus summary tables"),
                         all_args);

    auto* synth_cmd = app.add_subcommand("synth", "synthetic data generators");
    synth_cmd->require_subcommand(1);

    cli::DatasetGenSpec dataset_args;
    auto* synth_dataset = synth_cmd->add_subcommand(
        "dataset", "full pipeline-ready synthetic corpus with a wired config.ini");
    synth_dataset->add_option("--regions", dataset_args.n_regions, "number of regions");
    synth_dataset->add_option("--activities", dataset_args.n_activities, "number of activities");
    std::string dataset_years = "2003-2012";
    synth_dataset->add_option("--years", dataset_years, "year range, e.g. 2003-2019");
    synth_dataset->add_option("--seed", dataset_args.seed, "random seed");
    synth_dataset->add_option("--out", dataset_args.out_dir, "output directory")->required();

    SynthMatrixArgs matrix_args;
    auto* synth_matrix =
        synth_cmd->add_subcommand("matrix", "specialization matrix as an intensity CSV");
    synth_matrix->add_option("--regions", matrix_args.regions, "rows");
    synth_matrix->add_option("--activities", matrix_args.activities, "columns");
    synth_matrix->add_option("--model", matrix_args.model, "nested | random | block");
    synth_matrix->add_option("--density", matrix_args.density, "random model density");
    synth_matrix->add_option("--blocks", matrix_args.blocks, "block model component count");
    synth_matrix->add_option("--year", matrix_args.year, "year stamp");
    synth_matrix->add_option("--seed", matrix_args.seed, "random seed");
    synth_matrix->add_option("--out", matrix_args.out, "output CSV path")->required();

    SynthGraphArgs graph_args;
    auto* synth_graph = synth_cmd->add_subcommand("graph", "region graph as an adjacency CSV");
    synth_graph->add_option("--model", graph_args.model, "cycle | grid | two_cliques");
    synth_graph->add_option("--n", graph_args.n, "cycle length / clique size");
    synth_graph->add_option("--rows", graph_args.rows, "grid rows");
    synth_graph->add_option("--cols", graph_args.cols, "grid columns");
    synth_graph->add_option("--out", graph_args.out, "output CSV path")->required();

    SynthPanelArgs panel_args;
    auto* synth_panel =
        synth_cmd->add_subcommand("panel", "dynamic AR(1) panel as indicator CSVs");
    synth_panel->add_option("--n", panel_args.n, "regions");
    synth_panel->add_option("--t", panel_args.t, "periods");
    synth_panel->add_option("--rho", panel_args.rho, "autoregressive coefficient");
    synth_panel->add_option("--beta", panel_args.beta, "regressor coefficient");
    synth_panel->add_option("--sigma-mu", panel_args.sigma_mu, "fixed-effect std");
    synth_panel->add_option("--sigma-eps", panel_args.sigma_eps, "shock std");
    synth_panel->add_option("--ar-eps", panel_args.ar_eps, "AR(1) coefficient of the shock");
    synth_panel->add_option("--seed", panel_args.seed, "random seed");
    synth_panel->add_option("--out", panel_args.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);

        auto run_pipeline = [&](const char* name, const PipelineArgs& args, auto&& fn) {
            fn(cli::load_config(args.config_path, name, args.overrides));
        };

        if (app.got_subcommand("ingest")) run_pipeline("ingest", ingest_args, cli::run_ingest);
        if (app.got_subcommand("complexity"))
            run_pipeline("complexity", complexity_args, cli::run_complexity);
        if (app.got_subcommand("relatedness"))
            run_pipeline("relatedness", relatedness_args, cli::run_relatedness);
        if (app.got_subcommand("spatial")) run_pipeline("spatial", spatial_args, cli::run_spatial);
        if (app.got_subcommand("regress")) run_pipeline("regress", regress_args, cli::run_regress);
        if (app.got_subcommand("all")) run_pipeline("all", all_args, cli::run_all);

        if (synth_cmd->parsed()) {
            if (synth_dataset->parsed()) {
                const auto dash = dataset_years.find('-');
                if (dash == std::string::npos)
                    throw ConfigError("--years must look like 2003-2019");
                dataset_args.year_lo = std::stoi(dataset_years.substr(0, dash));
                dataset_args.year_hi = std::stoi(dataset_years.substr(dash + 1));
                cli::generate_dataset(dataset_args);
            } else if (synth_matrix->parsed()) {
                synth::SpecializationModel model = synth::Random{matrix_args.density};
                if (matrix_args.model == "nested")
                    model = synth::Nested{};
                else if (matrix_args.model == "block")
                    model = synth::Block{matrix_args.blocks};
                else if (matrix_args.model != "random")
                    throw ConfigError("unknown matrix model: " + matrix_args.model);
                const auto m = synth::gen_specialization(
                    matrix_args.regions, matrix_args.activities, model, matrix_args.seed,
                    matrix_args.year);
                // Emitted in the standard intensity format (entry value 1).
                csv::Writer w(matrix_args.out);
                w.row({"region", "activity", "year", "value"});
                for (Eigen::Index r = 0; r < m.entries.rows(); ++r)
                    for (Eigen::Index a = 0; a < m.entries.cols(); ++a)
                        if (m.entries(r, a) != 0.0)
                            w.row({m.regions[r], m.activities[a], std::to_string(m.year), "1"});
            } else if (synth_graph->parsed()) {
                synth::GraphModel model = synth::Grid{graph_args.rows, graph_args.cols};
                if (graph_args.model == "cycle")
                    model = synth::Cycle{graph_args.n};
                else if (graph_args.model == "two_cliques")
                    model = synth::TwoCliques{graph_args.n};
                else if (graph_args.model != "grid")
                    throw ConfigError("unknown graph model: " + graph_args.model);
                csv::write_adjacency(graph_args.out, synth::gen_region_graph(model));
            } else if (synth_panel->parsed()) {
                synth::DynamicPanelSpec spec;
                spec.n_regions = panel_args.n;
                spec.n_periods = panel_args.t;
                spec.rho = panel_args.rho;
                spec.beta = panel_args.beta;
                spec.sigma_mu = panel_args.sigma_mu;
                spec.sigma_eps = panel_args.sigma_eps;
                spec.ar_eps = panel_args.ar_eps;
                spec.seed = panel_args.seed;
                const auto data = synth::gen_dynamic_panel(spec);
                std::filesystem::create_directories(panel_args.out_dir);
                csv::write_indicator(panel_args.out_dir + "/y.csv", data.y);
                csv::write_indicator(panel_args.out_dir + "/x.csv", data.x);
            }
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigExit;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigExit;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataExit;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
