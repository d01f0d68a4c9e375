// End-to-end checks of the ecx binary: exit codes, config validation,
// determinism, and output shapes. The binary path comes from the build.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "ecx/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("ecx_cli_" + std::to_string(rd()) +
                                            std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& name = "") const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(ECX_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string capture_stderr(const std::string& args, const TempDir& dir) {
    const std::string errfile = dir.str("stderr.txt");
    const std::string cmd = std::string(ECX_CLI_PATH) + " " + args + " 2>" + errfile;
    std::system(cmd.c_str());
    std::ifstream in(errfile);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// One shared synthetic corpus for the pipeline cases below.
struct Corpus {
    TempDir dir;
    std::string config;
    Corpus() {
        REQUIRE(run("synth dataset --regions 60 --activities 50 --years 2003-2019 --seed 11 "
                    "--out " +
                    dir.str("data")) == 0);
        config = dir.str("data/config.ini");
    }
};

}  // namespace

TEST_CASE("synth subcommands emit the standard formats") {
    TempDir dir;
    CHECK(run("synth matrix --model nested --regions 4 --activities 4 --seed 1 --out " +
              dir.str("m.csv")) == 0);
    const auto panel = ecx::csv::read_intensity(dir.str("m.csv"));
    CHECK(panel.regions().size() == 4);
    CHECK(panel.values().size() == 10);  // 4+3+2+1 nested entries

    CHECK(run("synth graph --model cycle --n 5 --out " + dir.str("g.csv")) == 0);
    CHECK(ecx::csv::read_adjacency(dir.str("g.csv")).edge_count() == 5);

    CHECK(run("synth panel --n 10 --t 4 --seed 3 --out " + dir.str("panel")) == 0);
    CHECK(ecx::csv::read_indicator(dir.str("panel/y.csv"), "y").size() == 40);
    CHECK(ecx::csv::read_indicator(dir.str("panel/x.csv"), "x").size() == 40);
}

TEST_CASE("config validation reports every problem at once with exit code 2") {
    TempDir dir;
    write_file(dir.str("bad.ini"),
               "[io]\n"
               "[data]\nindustry_intensity = /nonexistent/ind.csv\n"
               "gdppc = /nonexistent/gdp.csv\n"
               "[complexity]\nyears = 2019-2003\nrca_threshold = -1\n"
               "[regress]\nhorizons = 0\n"
               "[typo_section]\nfoo = bar\n");
    TempDir scratch;
    const std::string err = capture_stderr("all -c " + dir.str("bad.ini"), scratch);
    CHECK(run("all -c " + dir.str("bad.ini")) == 2);
    // All problems in one pass, not fail-fast.
    CHECK(err.find("output_dir") != std::string::npos);
    CHECK(err.find("end before start") != std::string::npos);
    CHECK(err.find("rca_threshold") != std::string::npos);
    CHECK(err.find("horizons") != std::string::npos);
    CHECK(err.find("industry_intensity") != std::string::npos);
    CHECK(err.find("typo_section.foo") != std::string::npos);
}

TEST_CASE("export dataset without a pci file is a config error") {
    TempDir dir;
    REQUIRE(run("synth dataset --regions 20 --activities 20 --years 2003-2006 --seed 2 --out " +
                dir.str("d")) == 0);
    std::string cfg = read_file(dir.str("d/config.ini"));
    const auto pos = cfg.find("pci = ");
    REQUIRE(pos != std::string::npos);
    cfg.erase(pos, cfg.find('\n', pos) - pos + 1);
    write_file(dir.str("d/config.ini"), cfg);
    CHECK(run("complexity -c " + dir.str("d/config.ini") + " --datasets export") == 2);
}

TEST_CASE("missing required file gives exit code 2, missing stage outputs exit 3") {
    CHECK(run("all -c /nonexistent/config.ini") == 2);

    Corpus corpus;
    // spatial before complexity: indicators.csv does not exist yet
    CHECK(run("spatial -c " + corpus.config) == 3);
}

TEST_CASE("pipeline stages run standalone, reading each other's files") {
    Corpus corpus;
    CHECK(run("complexity -c " + corpus.config) == 0);
    const std::string out = corpus.dir.str("data/out/");
    CHECK(fs::exists(out + "indicators.csv"));
    CHECK(fs::exists(out + "activity_indicators.csv"));
    CHECK(fs::exists(out + "complexity_drops.csv"));
    CHECK(line_count(out + "indicators.csv") > 100);

    CHECK(run("spatial -c " + corpus.config) == 0);
    CHECK(fs::exists(out + "spatial_series.csv"));
    CHECK(fs::exists(out + "neighbor_avg.csv"));
    // 17 years x 2 indicators + header
    CHECK(line_count(out + "spatial_series.csv") == 1 + 17 * 2);

    CHECK(run("regress -c " + corpus.config + " --horizons 3") == 0);
    CHECK(fs::exists(out + "regression_coefficients.csv"));
    CHECK(fs::exists(out + "regression_diagnostics.csv"));
    CHECK(line_count(out + "regression_diagnostics.csv") == 1 + 8);  // 8 specs, one horizon

    CHECK(run("relatedness -c " + corpus.config) == 0);
    CHECK(fs::exists(out + "proximity_industry.csv"));
    CHECK(fs::exists(out + "density_export.csv"));
    CHECK(fs::exists(out + "scurve_industry.csv"));

    CHECK(run("ingest -c " + corpus.config) == 0);
    CHECK(fs::exists(out + "industry_panel.csv"));
    CHECK(fs::exists(out + "gdppc_real.csv"));
}

TEST_CASE("the all command is deterministic byte for byte") {
    Corpus corpus;
    const std::string out = corpus.dir.str("data/out");
    REQUIRE(run("all -c " + corpus.config) == 0);

    std::map<std::string, std::string> first;
    for (const auto& entry : fs::directory_iterator(out))
        first[entry.path().filename().string()] = read_file(entry.path().string());
    REQUIRE(first.size() > 20);
    REQUIRE(first.count("manifest.txt") == 1);

    fs::remove_all(out);
    REQUIRE(run("all -c " + corpus.config) == 0);
    for (const auto& entry : fs::directory_iterator(out)) {
        const auto name = entry.path().filename().string();
        INFO(name);
        CHECK(first.at(name) == read_file(entry.path().string()));
    }

    // Manifest checksums match the files on disk.
    std::ifstream manifest(out + "/manifest.txt");
    std::string line;
    int checked = 0;
    while (std::getline(manifest, line)) {
        if (line.rfind("output:", 0) != 0) continue;
        const auto eq = line.rfind('=');
        const std::string name = line.substr(7, eq - 7);
        const std::string hash = line.substr(eq + 1);
        CHECK(hash == ecx::csv::hex64(ecx::csv::fnv1a64_file(out + "/" + name)));
        ++checked;
    }
    CHECK(checked > 15);
}

TEST_CASE("crosswalk aggregation works through the cli") {
    TempDir dir;
    write_file(dir.str("intensity.csv"),
               "region,activity,year,value\nm1,a1,2010,5\nm2,a1,2010,7\nm3,a2,2010,2\n");
    write_file(dir.str("cw.csv"), "sub_region,region\nm1,R1\nm2,R1\nm3,R2\n");
    write_file(dir.str("gdp.csv"), "region,year,value\nR1,2010,100\nR2,2010,50\n");
    write_file(dir.str("pop.csv"), "region,year,value\nR1,2010,10\nR2,2010,5\n");
    write_file(dir.str("cfg.ini"),
               "[io]\noutput_dir = " + dir.str("out") +
                   "\n[data]\nindustry_intensity = " + dir.str("intensity.csv") +
                   "\ncrosswalk = " + dir.str("cw.csv") + "\ngdppc = " + dir.str("gdp.csv") +
                   "\npopulation = " + dir.str("pop.csv") +
                   "\n[complexity]\nyears = 2010\ndatasets = industry\n");
    REQUIRE(run("ingest -c " + dir.str("cfg.ini")) == 0);
    const auto panel = ecx::csv::read_intensity(dir.str("out/industry_panel.csv"));
    CHECK(panel.regions() == std::vector<std::string>{"R1", "R2"});
    CHECK(panel.year_slice(2010)(0, 0) == 12.0);
}

TEST_CASE("degenerate eigen systems exit with the numerical failure code") {
    TempDir dir;
    // Every region works every activity: all-ones M, unseparated spectrum.
    std::string intensity = "region,activity,year,value\n";
    for (int r = 0; r < 4; ++r)
        for (int a = 0; a < 4; ++a)
            intensity += "R" + std::to_string(r) + ",A" + std::to_string(a) + ",2010,1\n";
    write_file(dir.str("intensity.csv"), intensity);
    write_file(dir.str("cfg.ini"),
               "[io]\noutput_dir = " + dir.str("out") +
                   "\n[data]\nindustry_intensity = " + dir.str("intensity.csv") +
                   "\n[complexity]\nyears = 2010\ndatasets = industry\n");
    CHECK(run("complexity -c " + dir.str("cfg.ini")) == 4);
}
