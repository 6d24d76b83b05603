#ifndef PFLOW_EXPERIMENTS_HPP
#define PFLOW_EXPERIMENTS_HPP

#include "pflow/config.hpp"

#include <string>

namespace pflow {

/// Executes the manifest's experiment, writing traces/snapshots/reports
/// into out_dir and printing a one-line summary per check. Returns the
/// process exit status (0 iff every check passed).
int run_experiment(const RunManifest& manifest, const std::string& out_dir);

} // namespace pflow

#endif
