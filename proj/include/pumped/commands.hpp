#pragma once

#include <iosfwd>
#include <string>

#include "pumped/config.hpp"

namespace pumped {

// process exit codes shared by all commands
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;      // malformed configuration or flags
inline constexpr int kExitValidation = 3;  // model fails a physical constraint
inline constexpr int kExitNumeric = 4;     // defective / non-decaying / unstable
inline constexpr int kExitThreshold = 5;   // a verify command exceeded its threshold

/// 12-significant-digit formatting used for every file and report the CLI
/// emits; identical input produces identical bytes.
std::string format_number(double x);

/// Simulate with both methods and write trajectory.csv, lyapunov.csv and
/// method_delta.csv into config.out_dir.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Print eigenvalues, steady state (canonical plus two-level literature
/// order), similarity and biorthonormality residuals, and the coherence
/// decay check.
int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Steady-state population difference as one two-level parameter sweeps a
/// range; writes sweep.csv.
int cmd_sweep(const RunConfig& config, const std::string& param, double from, double to,
              std::size_t steps, std::ostream& out, std::ostream& err);

/// Accumulate the injected-trajectory ensemble and verify it against the
/// generator; fails (exit 5) above the residual threshold.
int cmd_ensemble_verify(const RunConfig& config, double quad_step, std::ostream& out,
                        std::ostream& err);

/// Print the bundled regression table with recomputed deltas; exit 5 when a
/// recomputed value drifts beyond the regression tolerances.
int cmd_fixtures(std::ostream& out, std::ostream& err);

}  // namespace pumped
