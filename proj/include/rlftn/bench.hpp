#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rlftn/blocks.hpp"
#include "rlftn/models.hpp"
#include "rlftn/mps.hpp"
#include "rlftn/types.hpp"

namespace rlftn {

/// Wall-clock accounting of one run, split into the time spent inside the
/// truncated factorization calls ("compression") and everything else.
/// Comparisons always use the per-iteration normalizations, so runs that
/// needed different sweep counts remain comparable.
struct TimingLedger {
  std::string method;  // "tsvd" or "rsvd"
  Index iterations = 0;
  double compression_seconds = 0.0;  // total, monotonic clock
  double other_seconds = 0.0;        // total minus compression

  double compression_per_iteration() const;
  double other_per_iteration() const;
};

/// Environment-normalized speedup of the randomized path:
///   f   = other_R / other_T     (per iteration; calibrates machine speed,
///                                since the non-compression work is identical)
///   tau = f * compression_T / compression_R  (per iteration)
/// tau > 1 means randomized compression is faster after calibration.
struct Speedup {
  double f = 0.0;
  double tau = 0.0;
};

/// Pure form on per-iteration times.  Throws std::invalid_argument when a
/// denominator (rand compression or det other time) is not positive.
Speedup speedup(double compression_det, double compression_rand, double other_det,
                double other_rand);
Speedup speedup(const TimingLedger& det, const TimingLedger& rand);

/// exp(mean(log v)).  Throws std::invalid_argument on empty input or any
/// non-positive entry.
double geometric_mean(const std::vector<double>& values);

/// One ground-state run of a paired comparison.
struct MethodResult {
  bool converged = false;
  double energy = 0.0;
  double magnetization = 0.0;
  std::optional<double> correlation_length;
  Index sweeps = 0;
  Index max_bond = 0;
  TimingLedger ledger;
};

/// One repeat of a grid point: deterministic and randomized runs from the
/// same initial-state seed, so observable deltas isolate the factorization.
struct PairedRun {
  std::uint64_t seed = 0;
  MethodResult det, rnd;
  Speedup sp;
  double delta_e_rel = 0.0;
  double delta_m_rel = 0.0;
  bool valid = false;  // both runs converged
};

/// One grid point (model configuration at one field value) with aggregates
/// over its repeats.
struct ComparePoint {
  std::string family;  // model family label, field excluded
  double parameter = 0.0;  // spin (chain) or width (cylinder)
  Index length = 0;
  double field = 0.0;
  Index chi = 0;
  Model model;
  std::vector<PairedRun> runs;
  double tau = 0.0;         // geometric mean over valid repeats
  double tau_spread = 0.0;  // (max - min) / tau over valid repeats
  double worst_delta_e = 0.0;
  double worst_delta_m = 0.0;
  bool valid = false;  // every repeat valid
};

struct CompareReport {
  std::vector<ComparePoint> points;
  /// Geometric mean of tau per model family, over that family's valid
  /// points (one tau per field value).
  std::vector<std::pair<std::string, double>> family_tau;
  double nominal_uncertainty = 0.10;  // reported alongside the empirical spread
  std::vector<std::string> excluded;  // labels of points with unconverged runs
};

/// Short family label of a model configuration, e.g. "chain-S0.5-L16" or
/// "cylinder-W4-L12"; the field value is reported separately.
std::string model_family(const Model& model);

/// Runs the tsvd/rsvd pair on every grid entry.  Each repeat r of point i
/// uses the run seed derive_seed(derive_seed(seed, i), r); the two methods
/// of one repeat share it.  base.method is ignored (both methods run).
template <class Scalar>
CompareReport compare_runs(const std::vector<Model>& grid, const TebdParams& base,
                           Index repeats, std::uint64_t seed);

/// Recomputes family_tau and excluded from the points.  Used after merging
/// reports that were computed point by point (parallel grids); the result
/// matches what compare_runs would have produced on the whole grid.
void aggregate_families(CompareReport& report);

/// CSV rows of a comparison: one line per (point, repeat, method) holding
/// model, parameter, length, field, chi, method, observables, per-iteration
/// times, and the repeat's speedup figures.
void write_compare_csv(std::ostream& out, const CompareReport& report);

/// Result of one synthetic-matrix timing point: paired factorizations of
/// block-diagonal matrices shaped like a B-form two-site update (total side
/// d * chi, two equal parity sectors, mildly decaying spectrum).  Matrix
/// generation is charged to both ledgers as the non-compression time, so f
/// is 1 by construction and tau reduces to the compression-time ratio.
struct SyntheticPoint {
  Index d = 0;       // physical dimension of the emulated update
  Index chi = 0;     // retained rank
  Index rows = 0;    // total matrix side, d * chi
  Index repeats = 0;
  TimingLedger det, rnd;
  Speedup sp;
  double t_ratio = 0.0;            // det / rand compression per call
  double max_rel_sigma_err = 0.0;  // worst top-chi singular value deviation
};

/// Times tsvd against rsvd (q = 4, probe width 2x the per-sector rank) on
/// `repeats` freshly generated matrices; consumes streams derived from
/// derive_seed(seed, seed_tag::bench_matrix).
SyntheticPoint synthetic_compare(Index d, Index chi, Index repeats, std::uint64_t seed);

/// synthetic_compare over several physical dimensions at fixed chi.  With
/// growing d the compression ratio chi / (d * chi) falls, which is the
/// regime where the randomized path pulls ahead.
std::vector<SyntheticPoint> d_scaling(const std::vector<Index>& dims, Index chi,
                                      Index repeats, std::uint64_t seed);

}  // namespace rlftn
