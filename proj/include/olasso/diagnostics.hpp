#pragma once

#include <cstdint>
#include <string>

namespace olasso::diagnostics {

/// Slack allowed when checking that an accepted step did not move the
/// objective the wrong way. Scaled by max(1, |previous objective|).
inline constexpr double kDescentSlack = 1e-10;

enum class Direction { kMinimize, kMaximize };

/// Records an accepted step. Returns false (and bumps the violation counter)
/// when the step moved the objective against `dir` by more than the slack.
/// In strict mode a violation throws instead.
bool record_step(const char* where, double before, double after,
                 Direction dir = Direction::kMinimize);

std::uint64_t steps_checked();
std::uint64_t violations();
std::string last_violation();
void reset();

/// Strict mode turns every violation into an olasso::Error(kInternal).
void set_strict(bool strict);
bool strict();

}  // namespace olasso::diagnostics
