#pragma once

#include <iosfwd>

#include "jjsim/cli/config.hpp"

namespace jjsim::cli {

enum class ExitCode : int {
    ok = 0,
    config_error = 2,     // bad config file, flags, or parameter domain
    numeric_failure = 3,  // integration blew up or a model precondition failed
    no_result = 4,        // run finished but the sought feature was not found
};

/// Runs the configured experiment. Writes the data table to <out>.csv or
/// <out>.json and a run summary to <out>.summary.json; the paths are echoed
/// on log. Exceptions are caught and mapped to the exit code.
ExitCode run_experiment(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace jjsim::cli
