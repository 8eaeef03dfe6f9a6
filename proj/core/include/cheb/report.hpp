#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cheb {

struct Violation {
  std::size_t trial = 0;
  double margin = 0.0;     ///< scale-normalized
  double raw_margin = 0.0; ///< in the units of the operands
  nlohmann::json instance;
};

struct TrialRecord {
  std::size_t trial = 0;
  int dim = 0;
  double margin = 0.0; ///< scale-normalized
};

/// Outcome of a randomized inequality run.
///
/// Margins are normalized by the per-instance scale max(1, largest Frobenius
/// norm among the instance matrices), so a trial is a violation exactly when
/// its margin is below -tolerance.
struct CheckReport {
  std::string suite_id;
  std::size_t trials = 0;
  std::vector<int> dims;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::string form; ///< statement form the margins were scored on
  std::vector<Violation> violations;
  std::vector<TrialRecord> records;
  double min_margin = 0.0;
  double max_margin = 0.0;
  double worst_residual = 0.0;
  /// How many trials fail the statement exactly as printed, for suites whose
  /// printed statement differs from the form that is scored.
  std::optional<std::size_t> printed_form_violations;
  std::vector<std::string> notes;
  nlohmann::json config;
  double elapsed_s = 0.0;

  bool passed() const { return violations.empty(); }
  /// Folds one trial into records, min/max and (if below tolerance) violations.
  void add_trial(std::size_t trial, int dim, double normalized_margin, double raw_margin,
                 const nlohmann::json &instance);
};

/// Schema: suite_id, trials, dims, seed, tolerance, form, min_margin,
/// max_margin, violations[], elapsed_s, plus optional extras.
nlohmann::json to_json(const CheckReport &r, bool include_elapsed = true);
/// Header `trial,dim,margin`, one line per trial.
std::string to_csv(const CheckReport &r);

/// Writes via a temporary sibling file and rename. Throws std::runtime_error
/// on I/O failure.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

} // namespace cheb
