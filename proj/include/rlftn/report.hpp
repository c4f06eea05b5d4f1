#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlftn/bench.hpp"
#include "rlftn/config.hpp"
#include "rlftn/mps.hpp"
#include "rlftn/observables.hpp"

namespace rlftn {

/// Everything one ground-state run leaves behind.  run_report_json() writes
/// the JSON artifact and parse_run_report() restores it exactly: numbers are
/// emitted with round-trip precision, so reruns can be compared field by
/// field (and byte by byte on the serialized form).
struct RunReport {
  std::string version;     // library version that produced the report
  RunConfig config;        // the run's full configuration
  std::uint64_t seed = 0;  // master seed actually used
  bool converged = false;
  Observables observables;
  TebdResult convergence;
  TimingLedger timing;
  /// Merged normalized Schmidt spectrum of every bond (0..L), descending.
  /// May be empty in hand-trimmed reports; consumers must check.
  std::vector<std::vector<double>> spectra;
};

std::string run_report_json(const RunReport& report);

/// Inverse of run_report_json.  Throws std::runtime_error on malformed
/// input or a missing field.
RunReport parse_run_report(const std::string& text);

/// JSON form of a method comparison: per-point aggregates, per-repeat
/// details, per-family geometric-mean taus, and the exclusion list.
std::string compare_report_json(const CompareReport& report);

/// Whole-file helpers; throw std::runtime_error naming the path on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace rlftn
