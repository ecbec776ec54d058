#pragma once

#include "hdet/rhp.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace hdet::cli {

/// Runs one invocation; args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "start:stop:count" (inclusive) or a comma list.
std::vector<double> parse_range(const std::string& text);

/// "3", "1-14", "2,5,7-9".
std::vector<int> parse_ids(const std::string& text);

/// Off-contour probe points, jump extrapolation steps and operator grid used by rhp-check.
std::vector<cplx> rhp_probe_points(Flavor flavor);
std::vector<double> rhp_deltas(Flavor flavor);
Grid rhp_grid(const KernelSpec& spec, double t, const GridOptions& options = {});

/// Worker count from HDET_THREADS, capped by the number of jobs.
unsigned worker_count(std::size_t jobs);

} // namespace hdet::cli
