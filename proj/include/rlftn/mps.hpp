#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rlftn/blocks.hpp"
#include "rlftn/models.hpp"
#include "rlftn/types.hpp"

namespace rlftn {

/// Schmidt coefficients of one bond, split by bond parity sector (index 0
/// even, 1 odd).  A sector may be empty.  On a normalized state the values
/// of both sectors together satisfy sum lambda^2 = 1.
using BondLambda = std::array<VectorR, 2>;

/// One site tensor of the Gamma/lambda form.  blocks[m][a] is the dense
/// matrix taking left bond sector a to right bond sector a ^ charge(m) for
/// physical basis state m.  Only parity-allowed blocks are stored, so the
/// fusion rule holds by construction; forbidden entries do not exist.
template <class Scalar>
struct SiteTensor {
  std::vector<std::array<Matrix<Scalar>, 2>> blocks;
};

/// Parity-symmetric matrix product state in the Gamma/lambda gauge.
///
/// lambdas has length() + 1 entries; lambdas[0] and lambdas[length()] are
/// the trivial boundary bonds (sector 0 of size one holding the value 1).
/// The state has even global parity.  Gauge quality is maintained by the
/// update routines only approximately during imaginary-time evolution; call
/// canonicalize() to restore the exact canonical form.
template <class Scalar>
struct SymmetricMPS {
  SiteStructure site;
  std::vector<SiteTensor<Scalar>> gammas;
  std::vector<BondLambda> lambdas;

  Index length() const { return static_cast<Index>(gammas.size()); }

  /// Total dimension of bond b (both sectors), b in [0, length()].
  Index bond_dimension(Index b) const {
    return lambdas[b][0].size() + lambdas[b][1].size();
  }

  Index max_bond_dimension() const {
    Index m = 0;
    for (Index b = 0; b <= length(); ++b) m = std::max(m, bond_dimension(b));
    return m;
  }

  /// Throws std::logic_error when block shapes disagree with the bond
  /// sector sizes, a bond is missing, or a boundary bond is nontrivial.
  void validate() const;
};

/// Even-parity random product state: each site is a uniformly drawn basis
/// state, the final site drawn within the parity sector that makes the
/// total even.  Consumes the stream derive_seed(seed, seed_tag::initial_state).
template <class Scalar>
SymmetricMPS<Scalar> random_product_state(const SiteStructure& site, Index length,
                                          std::uint64_t seed);

/// Instrumentation of one two-site update.  factorize_seconds brackets only
/// the truncated factorization call, not the surrounding contractions.
struct GateStats {
  double discarded_weight = 0.0;
  double factorize_seconds = 0.0;
  Index mid_rank = 0;
};

/// Applies a two-site gate to bond b (sites b, b+1) and recompresses the
/// middle bond to at most chi values.
///
/// The two-site wavefunction is assembled sector by sector, the gate acts
/// per pair-charge block (the only couplings parity allows), and the result
/// is refactorized as a block-diagonal matrix over the middle bond sector.
/// With GateForm::product the gate's Kronecker terms are applied to the two
/// halves separately and the factorization runs on the small core left over
/// after a per-sector QR, which is cheaper when the gate has few terms.
/// The retained spectrum is renormalized to sum lambda^2 = 1; the reported
/// discarded weight is relative to the exact squared norm of the evolved
/// wavefunction.
template <class Scalar>
GateStats apply_gate(SymmetricMPS<Scalar>& psi, Index bond, const TwoSiteGate& gate, Index chi,
                     const BlockMethod& method, const SectorRankRequest& request = {});

/// Restores the exact canonical Gamma/lambda gauge and unit norm: one
/// right-to-left and one left-to-right pass of identity gates with exact
/// factorization and no rank cap beyond the numerical rank, then a closing
/// layer of even-bond gates so every site ends in the form isometry_error
/// expects.  Trims exact null directions, so bond dimensions can shrink.
template <class Scalar>
void canonicalize(SymmetricMPS<Scalar>& psi);

/// Worst-bond deviation of the Schmidt weights from unit normalization,
/// max_b |sum_{s,k} lambda_{b,s,k}^2 - 1|.
template <class Scalar>
double lambda_norm_error(const SymmetricMPS<Scalar>& psi);

/// Worst elementwise deviation of the per-site isometries from the identity.
/// Sites that were last rewritten as the left member of a gate are tested as
/// left isometries of lambda * Gamma, the others as right isometries of
/// Gamma * lambda.  Both forms hold exactly for canonicalized states.
template <class Scalar>
double isometry_error(const SymmetricMPS<Scalar>& psi);

/// Ground-state search parameters.  The defaults implement the reference
/// protocol: second-order sweeps at step dt, stagnation checks every
/// check_interval sweeps, geometric step reduction on stagnation, and
/// convergence once a whole step reduction no longer lowers the energy by
/// more than energy_tol.
struct TebdParams {
  Index chi = 64;
  double dt_start = 0.4;
  double dt_decay = 0.7;
  double dt_min = 1e-5;
  double energy_tol = 1e-8;
  Index check_interval = 10;
  Index max_sweeps = 1000000;

  GateForm gate_form = GateForm::block;
  double schmidt_tol = 1e-14;

  BlockMethod::Kind method = BlockMethod::Kind::tsvd;
  int rsvd_power = 4;
  Index rsvd_oversample = 0;  // 0 = twice the per-sector rank
  Index rsvd_min_dim = 32;
  Index sector_slack = -1;  // -1 = default slack rule

  std::uint64_t seed = 1;
  bool collect_audit = true;
};

/// State of one stagnation check (taken every check_interval sweeps, plus
/// one record for the initial state).  The audit fields hold the worst
/// deviations over bonds/sites; they are zero when auditing is disabled.
struct CheckRecord {
  Index sweep = 0;
  double dt = 0.0;
  double energy = 0.0;
  double max_discarded = 0.0;  // largest per-gate discarded weight since the previous check
  Index max_bond = 0;
  double lambda_norm_error = 0.0;  // max_b |sum lambda^2 - 1|
  double isometry_error = 0.0;     // max site deviation from the expected isometry
  double elapsed_seconds = 0.0;
};

/// One step reduction event.  dt_after is 0 when the run stopped instead of
/// reducing further.
struct ReductionRecord {
  Index sweep = 0;
  double dt_before = 0.0;
  double dt_after = 0.0;
  double energy = 0.0;
};

struct TebdResult {
  bool converged = false;
  double energy = 0.0;
  Index sweeps = 0;
  Index factorize_calls = 0;
  double factorize_seconds = 0.0;
  double total_seconds = 0.0;
  double max_discarded = 0.0;
  std::vector<CheckRecord> checks;
  std::vector<ReductionRecord> reductions;
};

/// First violation of monotone convergence, if any: (sweep, rise) of the
/// first pair of successive checks whose energy rose by more than
/// 10 * energy_tol.  Audited from the first step reduction onward: the
/// random start approaches the first fixed point from an arbitrary side and
/// can cross its energy from below, while every later stage starts at the
/// previous fixed point and descends.
std::optional<std::pair<Index, double>> energy_monotonicity_violation(const TebdResult& result,
                                                                      double energy_tol);

/// Imaginary-time ground-state search, evolving psi in place.
///
/// Between checks the second-order sweeps are fused: a half step of the even
/// layer at the boundaries and merged full even layers in between, which is
/// algebraically identical to check_interval separate symmetric sweeps.
/// Gates are rebuilt at every step reduction.  The energy is measured
/// gauge-robustly, so no re-canonicalization happens during the run; the
/// final state is canonicalized before returning.
template <class Scalar>
TebdResult run_ground_state(SymmetricMPS<Scalar>& psi, const Model& model,
                            const TebdParams& params);

}  // namespace rlftn
