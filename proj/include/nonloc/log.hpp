#pragma once

#include <spdlog/spdlog.h>

namespace nonloc {

/// Library logger (stderr). Level comes from the NONLOC_LOG environment
/// variable (trace, debug, info, warn, error, off); default warn.
spdlog::logger& log();

}  // namespace nonloc
