#pragma once

#include "config.hpp"

namespace ecx::cli {

void run_ingest(const PipelineConfig& cfg);
void run_complexity(const PipelineConfig& cfg);
void run_relatedness(const PipelineConfig& cfg);
void run_spatial(const PipelineConfig& cfg);
void run_regress(const PipelineConfig& cfg);
void run_all(const PipelineConfig& cfg);

}  // namespace ecx::cli
