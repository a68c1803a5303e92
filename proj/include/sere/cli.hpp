#pragma once

#include <iosfwd>

#include "sere/service/service.hpp"

namespace sere {

/// Exit codes of the `sere` command.
enum ExitCode : int {
  kExitOk = 0,
  kExitNoMatch = 1,
  kExitUsage = 2,
  kExitBackend = 3,
  kExitBadCorpus = 4,
};

/// Entry point of the `sere` command with injectable streams and
/// environment.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const ServiceConfig::EnvLookup& env);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sere
