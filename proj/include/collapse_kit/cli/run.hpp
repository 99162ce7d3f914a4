#pragma once

#include <ostream>

#include "collapse_kit/cli/config.hpp"

namespace collapse_kit::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitThreshold = 3;

/// Resolves and executes `cfg`. Results go to the configured files or `out`,
/// diagnostics to `err`.
int run(RunConfig cfg, std::ostream& out, std::ostream& err);

/// Worker count for sweeps: hardware concurrency capped by COLLAPSE_KIT_THREADS.
unsigned worker_count(std::size_t jobs);

}  // namespace collapse_kit::cli
