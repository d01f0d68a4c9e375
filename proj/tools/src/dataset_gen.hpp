#pragma once

#include <cstdint>
#include <string>

namespace ecx::cli {

struct DatasetGenSpec {
    int n_regions = 30;
    int n_activities = 40;
    int year_lo = 2003;
    int year_hi = 2012;
    std::uint64_t seed = 42;
    std::string out_dir;
};

// Emits a complete, pipeline-ready synthetic corpus: industry and export
// intensity panels, nominal GDP per capita, population, a price index, PCI
// and world-share files, a grid adjacency, and a config.ini wired to them.
// Deterministic in (spec, seed).
void generate_dataset(const DatasetGenSpec& spec);

}  // namespace ecx::cli
