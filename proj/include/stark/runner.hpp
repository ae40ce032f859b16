#ifndef STARK_RUNNER_HPP
#define STARK_RUNNER_HPP

// Orchestration: basis -> initial state -> drives -> engine -> observables,
// with manifest, series CSV, density frames and an invariant summary written
// to an output directory.  The pipeline is deterministic: identical configs
// produce byte-identical outputs.

#include <filesystem>
#include <map>
#include <string>

#include "stark/config.hpp"
#include "stark/observables.hpp"
#include "stark/presets.hpp"

namespace stark {

struct RunResult {
    ExperimentConfig config;  // with auto boxes resolved
    SeriesTable series;
    DensityImage accumulated;
    std::map<std::string, double> diagnostics;
    bool invariants_pass = false;
    std::vector<std::string> summary_lines;
    GridSpec box_x, box_y;

    double diag(const std::string& key) const;
};

// Executes the configured experiment.  When `out_dir` is empty nothing is
// written and the result is only returned in memory.
RunResult run_experiment(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir);

// worker count for ensemble propagation; reads STARKDRIVE_WORKERS (default 1)
int worker_count();

}  // namespace stark

#endif
