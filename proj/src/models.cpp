#include "rlftn/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "rlftn/lapack.hpp"

namespace rlftn {

namespace {

// Pauli matrices in the ascending-m basis (|down>, |up>), used for the
// cylinder components.
MatrixR pauli_x() {
  MatrixR x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}
MatrixR pauli_z() {
  MatrixR z(2, 2);
  z << -1, 0, 0, 1;
  return z;
}

MatrixR kron(const MatrixR& a, const MatrixR& b) {
  MatrixR out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Operator acting as `op` on ring component i and identity elsewhere,
// components ordered most-significant first in the 2^W lexicographic basis.
MatrixR ring_component(const MatrixR& op, int i, int w) {
  MatrixR out = MatrixR::Identity(1, 1);
  for (int k = 0; k < w; ++k) out = kron(out, k == i ? op : MatrixR::Identity(2, 2));
  return out;
}

// Ring-local part of the cylinder Hamiltonian: the periodic xx loop plus the
// field.  The i -> i+1 sum is taken literally, so width 2 picks up its one
// pair from both sides.
MatrixR ring_hamiltonian(int w, double field) {
  const Index d = Index(1) << w;
  MatrixR h = MatrixR::Zero(d, d);
  for (int i = 0; i < w; ++i) {
    h -= ring_component(pauli_x(), i, w) * ring_component(pauli_x(), (i + 1) % w, w);
    h += field * ring_component(pauli_z(), i, w);
  }
  return h;
}

struct SiteOperators {
  Index dim;
  std::vector<int> charges;
  std::vector<std::pair<MatrixR, MatrixR>> couplings;  // sum_k a_k (x) b_k on each bond
  MatrixR one_site;                                    // field term, split onto bonds
};

SiteOperators site_operators(const ChainModel& m) {
  const SpinAlgebra alg = spin_operators(m.spin);
  SiteOperators ops;
  ops.dim = alg.dim;
  ops.charges.resize(alg.dim);
  for (Index k = 0; k < alg.dim; ++k) ops.charges[k] = (k % 2 == 0) ? 0 : 1;
  const double s2 = m.spin * m.spin;
  ops.couplings.push_back({-(1.0 / s2) * alg.x, alg.x});
  ops.one_site = (m.field / m.spin) * alg.z;
  return ops;
}

SiteOperators site_operators(const CylinderModel& m) {
  if (m.width < 2) throw std::invalid_argument("cylinder: width must be >= 2");
  SiteOperators ops;
  ops.dim = Index(1) << m.width;
  ops.charges.resize(ops.dim);
  for (Index b = 0; b < ops.dim; ++b) {
    int up = 0;
    for (int i = 0; i < m.width; ++i) up += static_cast<int>((b >> i) & 1);
    ops.charges[b] = up % 2;
  }
  for (int i = 0; i < m.width; ++i) {
    const MatrixR xi = ring_component(pauli_x(), i, m.width);
    ops.couplings.push_back({-xi, xi});
  }
  ops.one_site = ring_hamiltonian(m.width, m.field);
  return ops;
}

SiteOperators site_operators(const Model& model) {
  return std::visit([](const auto& m) { return site_operators(m); }, model);
}

bool commutes_with_parity(const MatrixR& h, const std::vector<int>& charges) {
  const Index d = static_cast<Index>(charges.size());
  for (Index r = 0; r < d * d; ++r)
    for (Index c = 0; c < d * d; ++c) {
      if (h(r, c) == 0.0) continue;
      const int qr = charges[r / d] ^ charges[r % d];
      const int qc = charges[c / d] ^ charges[c % d];
      if (qr != qc) return false;
    }
  return true;
}

}  // namespace

SpinAlgebra spin_operators(double spin) {
  const double two_s = 2.0 * spin;
  if (!(two_s >= 1.0) || std::abs(two_s - std::round(two_s)) > 1e-12)
    throw std::invalid_argument("spin_operators: 2S must be a positive integer");
  SpinAlgebra alg;
  alg.spin = spin;
  alg.dim = static_cast<Index>(std::lround(two_s)) + 1;
  alg.x = MatrixR::Zero(alg.dim, alg.dim);
  alg.z = MatrixR::Zero(alg.dim, alg.dim);
  alg.parity = MatrixR::Zero(alg.dim, alg.dim);
  for (Index k = 0; k < alg.dim; ++k) {
    const double m = -spin + static_cast<double>(k);
    alg.z(k, k) = m;
    alg.parity(k, k) = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^(m+S), m+S = k
    if (k + 1 < alg.dim) {
      // <m+1| x |m> = sqrt(S(S+1) - m(m+1)) / 2, and x is symmetric.
      const double v = 0.5 * std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
      alg.x(k + 1, k) = v;
      alg.x(k, k + 1) = v;
    }
  }
  return alg;
}

Index site_count(const Model& model) {
  return std::visit([](const auto& m) { return m.length; }, model);
}

SiteStructure parity_structure(const Model& model) {
  const SiteOperators ops = site_operators(model);
  SiteStructure s;
  s.dim = ops.dim;
  s.charges = ops.charges;
  for (int q : s.charges) (q == 0 ? s.dim_even : s.dim_odd)++;
  return s;
}

std::vector<MatrixR> bond_hamiltonians(const Model& model) {
  const Index length = site_count(model);
  if (length < 2) throw std::invalid_argument("bond_hamiltonians: need at least two sites");
  const SiteOperators ops = site_operators(model);
  const MatrixR id = MatrixR::Identity(ops.dim, ops.dim);

  MatrixR coupling = MatrixR::Zero(ops.dim * ops.dim, ops.dim * ops.dim);
  for (const auto& [a, b] : ops.couplings) coupling += kron(a, b);

  std::vector<MatrixR> bonds;
  bonds.reserve(length - 1);
  for (Index b = 0; b + 1 < length; ++b) {
    const double wl = (b == 0) ? 1.0 : 0.5;
    const double wr = (b + 2 == length) ? 1.0 : 0.5;
    MatrixR h = coupling + wl * kron(ops.one_site, id) + wr * kron(id, ops.one_site);
    bonds.push_back(std::move(h));
  }
  return bonds;
}

std::vector<MatrixR> order_operators(const Model& model) {
  if (const auto* chain = std::get_if<ChainModel>(&model)) {
    const SpinAlgebra alg = spin_operators(chain->spin);
    return {alg.x / chain->spin};
  }
  const auto& cyl = std::get<CylinderModel>(model);
  std::vector<MatrixR> ops;
  for (int i = 0; i < cyl.width; ++i) ops.push_back(ring_component(pauli_x(), i, cyl.width));
  return ops;
}

TwoSiteGate build_gate(const MatrixR& h_bond, const std::vector<int>& site_charges, double dt,
                       GateForm form, double schmidt_tol) {
  const Index d = static_cast<Index>(site_charges.size());
  if (h_bond.rows() != d * d || h_bond.cols() != d * d)
    throw std::invalid_argument("build_gate: h_bond must be d^2 x d^2");
  if (!h_bond.isApprox(h_bond.transpose(), 1e-12))
    throw std::invalid_argument("build_gate: h_bond must be symmetric");
  if (!commutes_with_parity(h_bond, site_charges))
    throw std::invalid_argument("build_gate: h_bond must conserve parity");
  if (!(dt >= 0.0)) throw std::invalid_argument("build_gate: dt must be >= 0");
  if (!(schmidt_tol > 0.0) || schmidt_tol >= 1.0)
    throw std::invalid_argument("build_gate: schmidt_tol must be in (0, 1)");

  TwoSiteGate gate;
  gate.form = form;
  gate.dt = dt;

  Eigen::SelfAdjointEigenSolver<MatrixR> es(h_bond);
  if (es.info() != Eigen::Success) throw std::runtime_error("build_gate: eigensolver failed");
  const VectorR w = (-dt * es.eigenvalues().array()).exp().matrix();
  gate.block = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();

  if (form != GateForm::product) return gate;

  // Operator Schmidt decomposition across the bond.  The pair-index
  // rearrangement R[(m1', m1), (m2', m2)] = U[(m1', m2'), (m1, m2)] is block
  // diagonal in the pair charge p(m1') ^ p(m1) = p(m2') ^ p(m2), so each
  // charge block is decomposed separately and every Kronecker factor comes
  // out with a definite charge.
  for (int q = 0; q <= 1; ++q) {
    std::vector<std::pair<Index, Index>> pairs;
    for (Index mp = 0; mp < d; ++mp)
      for (Index m = 0; m < d; ++m)
        if ((site_charges[mp] ^ site_charges[m]) == q) pairs.push_back({mp, m});
    if (pairs.empty()) continue;

    MatrixR r(pairs.size(), pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = 0; j < pairs.size(); ++j)
        r(i, j) = gate.block(pairs[i].first * d + pairs[j].first,
                             pairs[i].second * d + pairs[j].second);

    MatrixR u, vt;
    VectorR s;
    lapack::svd(r, u, s, vt);
    for (Index k = 0; k < s.size(); ++k) {
      if (s[k] <= 0.0) break;
      KronTerm term;
      term.charge = q;
      term.weight = s[k];
      term.left = MatrixR::Zero(d, d);
      term.right = MatrixR::Zero(d, d);
      const double root = std::sqrt(s[k]);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        term.left(pairs[i].first, pairs[i].second) = root * u(static_cast<Index>(i), k);
        term.right(pairs[i].first, pairs[i].second) = root * vt(k, static_cast<Index>(i));
      }
      gate.terms.push_back(std::move(term));
    }
  }

  std::sort(gate.terms.begin(), gate.terms.end(), [](const KronTerm& a, const KronTerm& b) {
    return std::tie(b.weight, a.charge) < std::tie(a.weight, b.charge);
  });
  const double cut = gate.terms.empty() ? 0.0 : schmidt_tol * gate.terms.front().weight;
  while (!gate.terms.empty() && gate.terms.back().weight <= cut) gate.terms.pop_back();
  return gate;
}

}  // namespace rlftn
