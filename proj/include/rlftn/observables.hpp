#pragma once

#include <optional>
#include <vector>

#include "rlftn/models.hpp"
#include "rlftn/mps.hpp"
#include "rlftn/types.hpp"

namespace rlftn {

/// <psi|psi>.  Exact contraction of the stored tensors; no gauge assumption.
template <class Scalar>
double norm_squared(const SymmetricMPS<Scalar>& psi);

/// Expectation of the product of single-site parity operators over all
/// sites, normalized by <psi|psi>.  Block-structured even-parity states give
/// +1 up to roundoff; a genuine contraction, so corrupted block data shows
/// up as a deviation.
template <class Scalar>
double global_parity(const SymmetricMPS<Scalar>& psi);

/// Total energy <H> / <psi|psi> from the model's bond terms.  Gauge-robust:
/// environments are contracted exactly, so the value is valid even when the
/// state has drifted from canonical form.
template <class Scalar>
double energy(const SymmetricMPS<Scalar>& psi, const Model& model);

/// Order parameter M = sqrt(sum_{k != k'} <O_k O_k'> / (N (N - 1))) over all
/// N elementary spins, with the model's order operators.  The square under
/// the root is clamped at zero against roundoff.
template <class Scalar>
double magnetization(const SymmetricMPS<Scalar>& psi, const Model& model);

/// Bulk-averaged order correlations c[r] = mean_j <O_j O_{j+r}> with both
/// sites restricted to the central half of the chain (for the cylinder, O is
/// the sum of the ring's components; the overall scale drops out of the
/// correlation length).  c[0] is unused and zero; the largest distance is
/// the window size minus one.
template <class Scalar>
std::vector<double> order_correlations(const SymmetricMPS<Scalar>& psi, const Model& model);

/// Second-moment correlation length
///   xi = sqrt( sum_{r >= 2} (r-1)^2 c[r] / sum_{r >= 2} c[r] )
/// from correlations indexed by distance.  Null when fewer than one usable
/// distance exists or the denominator is not positive.
std::optional<double> correlation_length_from(const std::vector<double>& c);

template <class Scalar>
std::optional<double> correlation_length(const SymmetricMPS<Scalar>& psi, const Model& model);

/// Entanglement entropy -sum p ln p of one bond, p = lambda^2 renormalized
/// to sum 1.  Meaningful as entanglement entropy only in canonical gauge.
double bond_entropy(const BondLambda& lambda);

/// Per-bond entropy, entries 0..L (the boundary bonds give 0).
template <class Scalar>
std::vector<double> entropy_profile(const SymmetricMPS<Scalar>& psi);

/// Merged normalized Schmidt values of bond b, descending.
template <class Scalar>
std::vector<double> bond_spectrum(const SymmetricMPS<Scalar>& psi, Index b);

/// Least-squares fit of a descending positive sequence to
///   sigma_k ~= (c1 k + c2)^(-gamma),  k = 1, 2, ...
/// linear in log-log at fixed c2/c1, with the ratio found by grid search
/// plus golden-section refinement.  fix_c2 pins c2 = 0 (pure power law).
/// Entries from the first non-positive value on are ignored.
struct PowerlawFit {
  double gamma = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double rms_log_residual = 0.0;
  Index points = 0;
};

PowerlawFit powerlaw_fit(const std::vector<double>& sigma, bool fix_c2 = false);

/// Fit of an entropy profile to S(j) = offset + (c/6) ln((L/pi) sin(pi j/L))
/// over the interior bonds j = 1..L-1.  entropy must have L+1 entries
/// indexed by bond.
struct CalabreseFit {
  double central_charge = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
};

CalabreseFit calabrese_fit(const std::vector<double>& entropy, Index length);

/// Everything the run report stores about a state.
struct Observables {
  double norm = 0.0;
  double energy = 0.0;
  double magnetization = 0.0;
  std::optional<double> correlation_length;
  std::vector<double> entropy;           // per bond
  std::vector<double> central_spectrum;  // bond L/2, normalized, descending
  std::vector<double> correlations;      // order correlations by distance
};

template <class Scalar>
Observables measure_all(const SymmetricMPS<Scalar>& psi, const Model& model);

}  // namespace rlftn
