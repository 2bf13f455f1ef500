#pragma once

#include "mats/config.hpp"

namespace mats {

/// Exit codes: 0 ok, 1 config error, 2 continuation stalled, 3 ellipticity
/// lost, 4 hypothesis check failed.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kStalled = 2,
  kEllipticityLost = 3,
  kHypothesisFailed = 4,
};

int cmd_solve(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_study(const RunConfig& cfg);
int cmd_transport(const RunConfig& cfg);

}  // namespace mats
