#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cauchy/experiment.hpp"

namespace cauchy::cli {

enum ExitCode : int { kOk = 0, kCertificateFailed = 1, kUsage = 2, kNumerical = 3 };

/// kNumerical if any row hit a numerical failure, else kCertificateFailed if
/// any row failed, else kOk.
int exit_code(const std::vector<ResultRow>& rows);

/// Parses `args` (without the program name) and runs the command. Data goes to
/// `out`, progress and diagnostics to `err`. `seed_override` carries the
/// SEED_OVERRIDE environment variable, unparsed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& seed_override);

}  // namespace cauchy::cli
