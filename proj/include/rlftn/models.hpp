#pragma once

#include <variant>
#include <vector>

#include "rlftn/types.hpp"

namespace rlftn {

/// Spin-S operator triple in the ascending-m basis |m = -S>, ..., |m = +S>:
///
///   z      = diag(m)
///   x      = standard ladder combination, <m+-1| x |m> = sqrt(S(S+1) - m(m+-1)) / 2
///   parity = diag((-1)^(m+S)), the Z2 symmetry all models below conserve
struct SpinAlgebra {
  double spin = 0.5;
  Index dim = 2;
  MatrixR x, z, parity;
};

/// Validates 2S in {1, 2, ...} and builds the operator triple.
SpinAlgebra spin_operators(double spin);

/// Ferromagnetic transverse-field chain of L spin-S sites,
///   H = -(1/S^2) sum_j x_j x_{j+1} + (h/S) sum_j z_j.
/// The 1/S^2 and 1/S factors keep the coupling and field scales
/// S-independent; at S = 1/2 the model is the usual Pauli chain with
/// critical field h = 1.
struct ChainModel {
  Index length = 2;
  double spin = 0.5;
  double field = 1.0;
};

/// Square-lattice cylinder of width W mapped to a chain of L rings.  Each
/// effective site is one ring of W Pauli spins (d = 2^W, component operators
/// are Pauli x/z).  Ring term: nearest-neighbor xx around the ring (periodic,
/// so W = 2 counts its single pair twice) plus the field; ring-ring coupling
/// is sum_i x_i (x) x_i.  Critical field near h = 3.04 for wide systems.
struct CylinderModel {
  Index length = 4;
  int width = 2;
  double field = 3.0;
};

using Model = std::variant<ChainModel, CylinderModel>;

Index site_count(const Model& model);

/// Local Z2 structure of one effective site: per-basis-state parity charge
/// (0 even, 1 odd) and the two sector dimensions.
struct SiteStructure {
  Index dim = 0;
  std::vector<int> charges;
  Index dim_even = 0;
  Index dim_odd = 0;
};

SiteStructure parity_structure(const Model& model);

/// The L-1 two-site bond terms h_b (d^2 x d^2, row/col index m1*d + m2).
/// One-site terms are split half/half onto the adjacent bonds, with full
/// weight at the two chain ends, so the terms sum to H exactly.  Every term
/// commutes with parity (x) parity.
std::vector<MatrixR> bond_hamiltonians(const Model& model);

/// Charge-odd single-site operators whose pair correlations define the
/// order parameter: {x/S} for the chain, the W Pauli x components for the
/// cylinder.  Normalized so a fully x-polarized product state gives
/// correlation 1.
std::vector<MatrixR> order_operators(const Model& model);

/// One Kronecker term of a two-site gate in product form.  left and right
/// carry the same definite parity charge, so the gate itself is charge even.
struct KronTerm {
  MatrixR left, right;
  int charge = 0;
  double weight = 0.0;  // operator Schmidt value, descending across terms
};

enum class GateForm { block, product };

/// Two-site imaginary-time gate exp(-dt h_bond).
///
/// block holds the dense d^2 x d^2 matrix (always present).  In product form
/// terms additionally holds the operator Schmidt decomposition
/// sum_k left_k (x) right_k, each factor of definite parity charge; terms
/// with Schmidt weight below schmidt_tol * (largest weight) are dropped.
struct TwoSiteGate {
  GateForm form = GateForm::block;
  double dt = 0.0;
  MatrixR block;
  std::vector<KronTerm> terms;
};

TwoSiteGate build_gate(const MatrixR& h_bond, const std::vector<int>& site_charges, double dt,
                       GateForm form, double schmidt_tol = 1e-14);

}  // namespace rlftn
