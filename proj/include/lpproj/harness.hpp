#pragma once

// Reproducible experiment driver: seeded instance generators, the
// inequality sweep runner, and the CSV/JSON trace emitters.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "lpproj/solvers.hpp"

namespace lpproj {

struct ExperimentConfig {
  double p = 2.0;
  int dim = 2;
  std::uint64_t seed = 0;
  int num_samples = 1000;
  int max_iter = 1000;
  double tol = 1e-10;
  double alpha0 = 1.0;
  StepSchedule::Kind schedule_kind = StepSchedule::Kind::constant;
  std::string output_format = "csv";  // "csv" or "json"
  std::string output_path;

  void validate() const;
};

struct ReportRecord {
  std::string check_label;
  int samples = 0;
  double worst_margin = 0.0;
  std::string worst_case_state;  // replayable serialized inputs
  bool passed = false;
};

/// Deterministic per-label RNG: the same (seed, label) pair always yields
/// the same stream regardless of sweep order.
std::mt19937_64 rng_for(std::uint64_t seed, const std::string& label);

/// Draws a witness point and m halfspaces containing it (half of the
/// offsets active, half slack). Deterministic per seed.
std::pair<std::vector<SetDescriptor>, Vec> generate_feasibility_instance(
    std::uint64_t seed, int m, int dim, const LpSpace& s);

/// Random monotone affine VI over a box. When identity_special is set, A is
/// the identity map (M = I, b = 0), for which the p = 2 solution is
/// P_box(f) analytically.
std::pair<VIProblem, std::optional<Vec>> generate_monotone_vi_instance(
    std::uint64_t seed, int dim, const LpSpace& s,
    bool identity_special = false);

/// Samples num_samples random inputs per check label and aggregates worst
/// margins. Unknown labels throw. passed <=> worst_margin >= -tol.
std::vector<ReportRecord> run_inequality_sweep(
    const ExperimentConfig& cfg, const std::vector<std::string>& checks);

/// All labels run_inequality_sweep understands.
const std::vector<std::string>& known_check_labels();

void emit_trace_csv(const IterTrace& trace, std::ostream& os);
void emit_trace_json(const IterTrace& trace, const ExperimentConfig& cfg,
                     std::ostream& os);

/// Writes the trace to cfg.output_path in cfg.output_format.
void emit_trace(const IterTrace& trace, const ExperimentConfig& cfg);

void emit_report_csv(const std::vector<ReportRecord>& records, std::ostream& os);
void emit_report_json(const std::vector<ReportRecord>& records,
                      const ExperimentConfig& cfg, std::ostream& os);

}  // namespace lpproj
