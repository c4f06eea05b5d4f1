#include "rlftn/mps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "rlftn/lapack.hpp"
#include "rlftn/observables.hpp"
#include "rlftn/rng.hpp"

namespace rlftn {

namespace {

// Division floor for inverse-lambda gauge updates, and the matching trim on
// retained normalized values.  Keeping only values >= 10x the floor means the
// floor never actually distorts a division, so the local isometry identities
// of the update survive to roundoff accuracy.
constexpr double kLambdaFloor = 1e-12;
constexpr double kLambdaTrim = 1e-11;

VectorR floored_inverse(const VectorR& lam) {
  VectorR inv(lam.size());
  for (Index i = 0; i < lam.size(); ++i) inv[i] = 1.0 / std::max(lam[i], kLambdaFloor);
  return inv;
}

double seconds_between(std::chrono::steady_clock::time_point a,
                       std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

template <class Scalar>
void SymmetricMPS<Scalar>::validate() const {
  const Index n = length();
  if (n < 1) throw std::logic_error("mps: no sites");
  if (static_cast<Index>(lambdas.size()) != n + 1)
    throw std::logic_error("mps: need one bond more than sites");
  if (site.dim < 2 || static_cast<Index>(site.charges.size()) != site.dim)
    throw std::logic_error("mps: invalid site structure");
  if (lambdas[0][0].size() != 1 || lambdas[0][1].size() != 0 || lambdas[n][0].size() != 1 ||
      lambdas[n][1].size() != 0)
    throw std::logic_error("mps: boundary bonds must be trivial even sectors");
  for (Index j = 0; j < n; ++j) {
    if (static_cast<Index>(gammas[j].blocks.size()) != site.dim)
      throw std::logic_error("mps: physical dimension mismatch");
    for (Index m = 0; m < site.dim; ++m)
      for (int a = 0; a < 2; ++a) {
        const auto& b = gammas[j].blocks[m][a];
        if (b.rows() != lambdas[j][a].size() ||
            b.cols() != lambdas[j + 1][a ^ site.charges[m]].size())
          throw std::logic_error("mps: block shape breaks the parity fusion rule");
      }
  }
}

template <class Scalar>
SymmetricMPS<Scalar> random_product_state(const SiteStructure& site, Index length,
                                          std::uint64_t seed) {
  if (length < 2) throw std::invalid_argument("random_product_state: need at least two sites");
  if (site.dim < 2 || static_cast<Index>(site.charges.size()) != site.dim)
    throw std::invalid_argument("random_product_state: invalid site structure");

  CounterRng rng(derive_seed(seed, seed_tag::initial_state));
  auto draw = [&rng](Index n) {
    return std::min<Index>(n - 1, static_cast<Index>(rng.uniform() * static_cast<double>(n)));
  };

  std::vector<Index> basis(length);
  int partial = 0;
  for (Index j = 0; j + 1 < length; ++j) {
    basis[j] = draw(site.dim);
    partial ^= site.charges[basis[j]];
  }
  // Close the total parity to even; both sectors are non-empty for any spin.
  std::vector<Index> closing;
  for (Index m = 0; m < site.dim; ++m)
    if (site.charges[m] == partial) closing.push_back(m);
  if (closing.empty()) throw std::invalid_argument("random_product_state: parity not closable");
  basis[length - 1] = closing[draw(static_cast<Index>(closing.size()))];

  // Bond sector = cumulative parity of the sites to the left.
  std::vector<int> cum(length + 1, 0);
  for (Index j = 0; j < length; ++j) cum[j + 1] = cum[j] ^ site.charges[basis[j]];

  SymmetricMPS<Scalar> psi;
  psi.site = site;
  psi.lambdas.resize(length + 1);
  psi.gammas.resize(length);
  for (Index b = 0; b <= length; ++b) {
    psi.lambdas[b][cum[b]] = VectorR::Ones(1);
    psi.lambdas[b][cum[b] ^ 1] = VectorR();
  }
  for (Index j = 0; j < length; ++j) {
    psi.gammas[j].blocks.resize(site.dim);
    for (Index m = 0; m < site.dim; ++m)
      for (int a = 0; a < 2; ++a) {
        const Index rows = (a == cum[j]) ? 1 : 0;
        const Index cols = ((a ^ site.charges[m]) == cum[j + 1]) ? 1 : 0;
        psi.gammas[j].blocks[m][a] = Matrix<Scalar>::Zero(rows, cols);
      }
    psi.gammas[j].blocks[basis[j]][cum[j]](0, 0) = Scalar(1);
  }
  return psi;
}

template <class Scalar>
GateStats apply_gate(SymmetricMPS<Scalar>& psi, Index bond, const TwoSiteGate& gate, Index chi,
                     const BlockMethod& method, const SectorRankRequest& request) {
  const Index n_sites = psi.length();
  if (bond < 0 || bond + 1 >= n_sites) throw std::invalid_argument("apply_gate: bond out of range");
  if (chi < 1) throw std::invalid_argument("apply_gate: chi must be >= 1");
  const Index d = psi.site.dim;
  const std::vector<int>& p = psi.site.charges;
  if (gate.block.rows() != d * d || gate.block.cols() != d * d)
    throw std::invalid_argument("apply_gate: gate does not match the physical dimension");

  BondLambda& lam_l = psi.lambdas[bond];
  BondLambda& lam_m = psi.lambdas[bond + 1];
  BondLambda& lam_r = psi.lambdas[bond + 2];
  SiteTensor<Scalar>& g1 = psi.gammas[bond];
  SiteTensor<Scalar>& g2 = psi.gammas[bond + 1];

  const std::array<Index, 2> nl{lam_l[0].size(), lam_l[1].size()};
  const std::array<Index, 2> nm{lam_m[0].size(), lam_m[1].size()};
  const std::array<Index, 2> nr{lam_r[0].size(), lam_r[1].size()};

  // Weighted site blocks: alm carries the left and middle lambdas, br the
  // right one, so alm * br is the two-site wavefunction.
  std::vector<std::array<Matrix<Scalar>, 2>> alm(d), br(d);
  for (Index m = 0; m < d; ++m)
    for (int a = 0; a < 2; ++a) {
      alm[m][a] = lam_l[a].template cast<Scalar>().asDiagonal() * g1.blocks[m][a] *
                  lam_m[a ^ p[m]].template cast<Scalar>().asDiagonal();
      br[m][a] = g2.blocks[m][a] * lam_r[a ^ p[m]].template cast<Scalar>().asDiagonal();
    }

  // Layout of the two-site matrix, block diagonal over the middle sector s:
  // rows (m1, alpha) in left sector s ^ p[m1], columns (m2, gamma) in right
  // sector s ^ p[m2], both ordered by ascending m.
  std::array<std::vector<Index>, 2> row_off, col_off;
  std::array<Index, 2> rows{}, cols{};
  for (int s = 0; s < 2; ++s) {
    row_off[s].resize(d);
    col_off[s].resize(d);
    for (Index m = 0; m < d; ++m) {
      row_off[s][m] = rows[s];
      rows[s] += nl[s ^ p[m]];
      col_off[s][m] = cols[s];
      cols[s] += nr[s ^ p[m]];
    }
  }

  BlockDiagMatrix<Scalar> thetap;
  thetap.charges = {0, 1};
  thetap.blocks.resize(2);
  std::array<Matrix<Scalar>, 2> qfac;
  bool lifted = false;

  if (gate.form == GateForm::block) {
    // theta_s in one GEMM per sector from the stacked site blocks.
    std::array<Matrix<Scalar>, 2> theta;
    for (int s = 0; s < 2; ++s) {
      if (nm[s] == 0) {
        theta[s].setZero(rows[s], cols[s]);
        continue;
      }
      Matrix<Scalar> astack(rows[s], nm[s]);
      Matrix<Scalar> bstack(nm[s], cols[s]);
      for (Index m = 0; m < d; ++m) {
        astack.middleRows(row_off[s][m], nl[s ^ p[m]]) = alm[m][s ^ p[m]];
        bstack.middleCols(col_off[s][m], nr[s ^ p[m]]) = br[m][s];
      }
      theta[s] = astack * bstack;
    }

    // The gate only couples physical pairs of equal combined parity, so it
    // acts as one dense block per pair charge q on pair-major columns.
    std::array<std::vector<std::pair<Index, Index>>, 2> pairs;
    for (Index m1 = 0; m1 < d; ++m1)
      for (Index m2 = 0; m2 < d; ++m2) pairs[p[m1] ^ p[m2]].push_back({m1, m2});
    std::array<Matrix<Scalar>, 2> gt;
    for (int q = 0; q < 2; ++q) {
      const Index n = static_cast<Index>(pairs[q].size());
      gt[q].resize(n, n);
      // theta' columns = theta columns * gt, so gt(i, j) = gate(pair_j, pair_i).
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          gt[q](i, j) =
              static_cast<Scalar>(gate.block(pairs[q][j].first * d + pairs[q][j].second,
                                             pairs[q][i].first * d + pairs[q][i].second));
    }

    for (int sp = 0; sp < 2; ++sp) thetap.blocks[sp].resize(rows[sp], cols[sp]);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        const int q = a ^ c;
        const Index n = static_cast<Index>(pairs[q].size());
        const Index blk = nl[a] * nr[c];
        if (blk == 0 || n == 0) continue;
        // Scatter the (a, c) blocks of every pair into columns, one GEMM with
        // the gate block, gather into the new middle sectors.  Odd (x) odd
        // couplings are exactly the entries moving weight between sectors.
        Matrix<Scalar> tin(blk, n);
        for (Index i = 0; i < n; ++i) {
          const auto [m1, m2] = pairs[q][i];
          const int s = a ^ p[m1];
          Eigen::Map<Matrix<Scalar>>(tin.col(i).data(), nl[a], nr[c]) =
              theta[s].block(row_off[s][m1], col_off[s][m2], nl[a], nr[c]);
        }
        const Matrix<Scalar> tout = tin * gt[q];
        for (Index i = 0; i < n; ++i) {
          const auto [m1, m2] = pairs[q][i];
          const int sp = a ^ p[m1];
          thetap.blocks[sp].block(row_off[sp][m1], col_off[sp][m2], nl[a], nr[c]) =
              Eigen::Map<const Matrix<Scalar>>(tout.col(i).data(), nl[a], nr[c]);
        }
      }
  } else {
    if (gate.terms.empty())
      throw std::invalid_argument("apply_gate: product-form gate has no terms");
    const Index nk = static_cast<Index>(gate.terms.size());
    for (int sp = 0; sp < 2; ++sp) {
      // Kronecker terms applied to the two halves separately; the halves
      // meet in a fused inner index (k, beta) with beta in sector sp ^ q_k.
      std::vector<Index> koff(nk);
      Index fused = 0;
      for (Index k = 0; k < nk; ++k) {
        koff[k] = fused;
        fused += nm[sp ^ gate.terms[k].charge];
      }
      Matrix<Scalar> x = Matrix<Scalar>::Zero(rows[sp], fused);
      Matrix<Scalar> y = Matrix<Scalar>::Zero(fused, cols[sp]);
      for (Index k = 0; k < nk; ++k) {
        const KronTerm& t = gate.terms[k];
        const Index w = nm[sp ^ t.charge];
        if (w == 0) continue;
        for (Index m1p = 0; m1p < d; ++m1p) {
          const int a = sp ^ p[m1p];
          if (nl[a] == 0) continue;
          auto xblk = x.block(row_off[sp][m1p], koff[k], nl[a], w);
          for (Index m1 = 0; m1 < d; ++m1)
            if (t.left(m1p, m1) != 0.0) xblk += t.left(m1p, m1) * alm[m1][a];
        }
        for (Index m2p = 0; m2p < d; ++m2p) {
          const int c = sp ^ p[m2p];
          if (nr[c] == 0) continue;
          auto yblk = y.block(koff[k], col_off[sp][m2p], w, nr[c]);
          for (Index m2 = 0; m2 < d; ++m2)
            if (t.right(m2p, m2) != 0.0) yblk += t.right(m2p, m2) * br[m2][sp ^ t.charge];
        }
      }
      if (rows[sp] == 0 || fused == 0) {
        qfac[sp].resize(rows[sp], 0);
        thetap.blocks[sp].setZero(0, cols[sp]);
      } else {
        // Thin QR of the left half; the small core r * y carries the whole
        // spectrum, so the expensive factorization runs on it instead of on
        // the full two-site matrix.
        Matrix<Scalar> r;
        lapack::qr(x, qfac[sp], r);
        thetap.blocks[sp] = r * y;
      }
    }
    lifted = true;
  }

  const double total_sq = thetap.squared_norm();
  if (!(total_sq > 0.0)) throw std::runtime_error("apply_gate: evolved wavefunction vanished");

  const auto t0 = std::chrono::steady_clock::now();
  BlockFactorization<Scalar> f = block_factorize(thetap, chi, request, method);
  const auto t1 = std::chrono::steady_clock::now();

  double kept_sq = 0.0;
  for (const auto& fac : f.factors) kept_sq += fac.sigma.squaredNorm();
  if (kept_sq > 0.0) {
    const double cut = kLambdaTrim * std::sqrt(kept_sq);
    bool trimmed = false;
    for (auto& fac : f.factors) {
      Index r = fac.rank();
      while (r > 0 && fac.sigma[r - 1] < cut) --r;
      if (r == fac.rank()) continue;
      fac.left = Matrix<Scalar>(fac.left.leftCols(r));
      fac.sigma = VectorR(fac.sigma.head(r));
      fac.right_adj = Matrix<Scalar>(fac.right_adj.topRows(r));
      trimmed = true;
    }
    if (trimmed) {
      kept_sq = 0.0;
      for (const auto& fac : f.factors) kept_sq += fac.sigma.squaredNorm();
    }
  }
  if (!(kept_sq > 0.0)) throw std::runtime_error("apply_gate: truncation removed the whole state");

  if (lifted)
    for (int sp = 0; sp < 2; ++sp)
      f.factors[sp].left = Matrix<Scalar>(qfac[sp] * f.factors[sp].left);

  const double inv_norm = 1.0 / std::sqrt(kept_sq);
  for (int s = 0; s < 2; ++s) lam_m[s] = f.factors[s].sigma * inv_norm;

  std::array<VectorR, 2> linv{floored_inverse(lam_l[0]), floored_inverse(lam_l[1])};
  std::array<VectorR, 2> rinv{floored_inverse(lam_r[0]), floored_inverse(lam_r[1])};
  for (Index m = 0; m < d; ++m)
    for (int a = 0; a < 2; ++a) {
      const int s = a ^ p[m];
      g1.blocks[m][a] = linv[a].template cast<Scalar>().asDiagonal() *
                        f.factors[s].left.middleRows(row_off[s][m], nl[a]);
      g2.blocks[m][a] = f.factors[a].right_adj.middleCols(col_off[a][m], nr[a ^ p[m]]) *
                        rinv[a ^ p[m]].template cast<Scalar>().asDiagonal();
    }

  GateStats out;
  out.discarded_weight = std::max(0.0, 1.0 - kept_sq / total_sq);
  out.factorize_seconds = seconds_between(t0, t1);
  out.mid_rank = lam_m[0].size() + lam_m[1].size();
  return out;
}

template <class Scalar>
void canonicalize(SymmetricMPS<Scalar>& psi) {
  psi.validate();
  const Index n = psi.length();
  TwoSiteGate id;
  id.form = GateForm::block;
  id.dt = 0.0;
  id.block = MatrixR::Identity(psi.site.dim * psi.site.dim, psi.site.dim * psi.site.dim);
  SectorRankRequest req;
  req.policy = RankPolicy::maximal;
  const BlockMethod exact = BlockMethod::deterministic();
  // Identity gates cannot raise any rank, so this cap never binds.
  const Index cap = psi.site.dim * psi.max_bond_dimension();
  // Right-to-left pass leaves sites 1..n-1 right-canonical; the second pass
  // then produces the true Schmidt values bond by bond and leaves the state
  // canonical in both directions, with unit norm.
  for (Index b = n - 2; b >= 0; --b) apply_gate(psi, b, id, cap, exact, req);
  for (Index b = 0; b + 1 < n; ++b) apply_gate(psi, b, id, cap, exact, req);
  // The sequential pass leaves odd sites written as left factors, so their
  // right isometry holds only up to roundoff divided by the smallest Schmidt
  // value, which is poor for deep spectra.  A final layer of non-overlapping
  // even-bond gates rewrites every even site as a left factor and every odd
  // site as a right factor, the layout a sweep ends with, so both tested
  // isometries hold at machine precision regardless of the spectrum.
  for (Index b = 0; b + 1 < n; b += 2) apply_gate(psi, b, id, cap, exact, req);
}

template <class Scalar>
double lambda_norm_error(const SymmetricMPS<Scalar>& psi) {
  double worst = 0.0;
  for (const auto& lam : psi.lambdas)
    worst = std::max(worst, std::abs(lam[0].squaredNorm() + lam[1].squaredNorm() - 1.0));
  return worst;
}

// Worst deviation from the isometry each site is expected to satisfy after a
// sweep whose last layer was the even one: sites last updated as the left
// member of a gate are exact left isometries of lambda * Gamma, the others
// exact right isometries of Gamma * lambda.  Both hold for product states
// and canonicalized states.
template <class Scalar>
double isometry_error(const SymmetricMPS<Scalar>& psi) {
  const Index n = psi.length();
  const Index d = psi.site.dim;
  const std::vector<int>& p = psi.site.charges;
  double worst = 0.0;
  for (Index j = 0; j < n; ++j) {
    const bool left_iso = (j % 2 == 0) && (j + 1 < n);
    for (int out = 0; out < 2; ++out) {
      const Index nout = left_iso ? psi.lambdas[j + 1][out].size() : psi.lambdas[j][out].size();
      if (nout == 0) continue;
      Matrix<Scalar> w = Matrix<Scalar>::Zero(nout, nout);
      for (Index m = 0; m < d; ++m) {
        const int a = left_iso ? (out ^ p[m]) : out;
        if (left_iso) {
          if (psi.lambdas[j][a].size() == 0) continue;
          const Matrix<Scalar> t =
              psi.lambdas[j][a].template cast<Scalar>().asDiagonal() * psi.gammas[j].blocks[m][a];
          w.noalias() += t.adjoint() * t;
        } else {
          const int b = a ^ p[m];
          if (psi.lambdas[j + 1][b].size() == 0) continue;
          const Matrix<Scalar> t = psi.gammas[j].blocks[m][a] *
                                   psi.lambdas[j + 1][b].template cast<Scalar>().asDiagonal();
          w.noalias() += t * t.adjoint();
        }
      }
      w.diagonal().array() -= Scalar(1);
      worst = std::max(worst, w.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

template <class Scalar>
TebdResult run_ground_state(SymmetricMPS<Scalar>& psi, const Model& model,
                            const TebdParams& prm) {
  if (prm.chi < 1) throw std::invalid_argument("run_ground_state: chi must be >= 1");
  if (!(prm.dt_start > 0.0)) throw std::invalid_argument("run_ground_state: dt_start must be > 0");
  if (!(prm.dt_decay > 0.0 && prm.dt_decay < 1.0))
    throw std::invalid_argument("run_ground_state: dt_decay must be in (0, 1)");
  if (!(prm.dt_min > 0.0)) throw std::invalid_argument("run_ground_state: dt_min must be > 0");
  if (!(prm.energy_tol > 0.0))
    throw std::invalid_argument("run_ground_state: energy_tol must be > 0");
  if (prm.check_interval < 1)
    throw std::invalid_argument("run_ground_state: check_interval must be >= 1");
  psi.validate();
  const SiteStructure st = parity_structure(model);
  if (psi.length() != site_count(model) || psi.site.dim != st.dim ||
      psi.site.charges != st.charges)
    throw std::invalid_argument("run_ground_state: state does not fit the model");

  const Index n = psi.length();
  const std::vector<MatrixR> bonds = bond_hamiltonians(model);
  const auto t_run = std::chrono::steady_clock::now();

  std::vector<TwoSiteGate> even_half(n - 1), even_full(n - 1), odd_full(n - 1);
  auto rebuild = [&](double dt) {
    for (Index b = 0; b + 1 < n; ++b) {
      if (b % 2 == 0) {
        even_half[b] =
            build_gate(bonds[b], psi.site.charges, dt / 2, prm.gate_form, prm.schmidt_tol);
        even_full[b] =
            build_gate(bonds[b], psi.site.charges, dt, prm.gate_form, prm.schmidt_tol);
      } else {
        odd_full[b] = build_gate(bonds[b], psi.site.charges, dt, prm.gate_form, prm.schmidt_tol);
      }
    }
  };

  BlockMethod method = prm.method == BlockMethod::Kind::rsvd
                           ? BlockMethod::randomized(prm.rsvd_power, 0)
                           : BlockMethod::deterministic();
  method.rsvd_min_dim = prm.rsvd_min_dim;
  method.rsvd.oversample = prm.rsvd_oversample;
  SectorRankRequest req;
  req.chi = prm.chi;
  req.slack = prm.sector_slack;
  const std::uint64_t stream = derive_seed(prm.seed, seed_tag::rsvd_stream);
  std::uint64_t call_index = 0;

  TebdResult res;
  double check_discard = 0.0;
  auto apply_layer = [&](const std::vector<TwoSiteGate>& gates, Index first) {
    for (Index b = first; b + 1 < n; b += 2) {
      method.rsvd.seed = derive_seed(stream, call_index++);
      const GateStats gs = apply_gate(psi, b, gates[b], prm.chi, method, req);
      res.factorize_seconds += gs.factorize_seconds;
      ++res.factorize_calls;
      check_discard = std::max(check_discard, gs.discarded_weight);
      res.max_discarded = std::max(res.max_discarded, gs.discarded_weight);
    }
  };
  auto record_check = [&](Index sweep, double dt) {
    CheckRecord c;
    c.sweep = sweep;
    c.dt = dt;
    c.energy = rlftn::energy(psi, model);
    c.max_discarded = check_discard;
    check_discard = 0.0;
    c.max_bond = psi.max_bond_dimension();
    if (prm.collect_audit) {
      c.lambda_norm_error = lambda_norm_error(psi);
      c.isometry_error = isometry_error(psi);
    }
    c.elapsed_seconds = seconds_between(t_run, std::chrono::steady_clock::now());
    res.checks.push_back(c);
    return c.energy;
  };

  double dt = prm.dt_start;
  rebuild(dt);
  double last_check_e = record_check(0, dt);
  double last_reduction_e = 0.0;
  bool have_reduction = false;
  Index sweeps = 0;

  while (sweeps < prm.max_sweeps) {
    const Index k = std::min<Index>(prm.check_interval, prm.max_sweeps - sweeps);
    // k symmetric sweeps with the interior even half-layers merged:
    // E/2 (O E)^(k-1) O E/2 is identical to (E/2 O E/2)^k.
    apply_layer(even_half, 0);
    apply_layer(odd_full, 1);
    for (Index i = 1; i < k; ++i) {
      apply_layer(even_full, 0);
      apply_layer(odd_full, 1);
    }
    apply_layer(even_half, 0);
    sweeps += k;

    const double e = record_check(sweeps, dt);
    if (std::abs(last_check_e - e) < prm.energy_tol) {
      // Stagnant at this step: either the whole cascade converged or the
      // step shrinks by the decay factor.
      ReductionRecord r;
      r.sweep = sweeps;
      r.dt_before = dt;
      r.energy = e;
      if (have_reduction && last_reduction_e - e < prm.energy_tol) {
        r.dt_after = 0.0;
        res.reductions.push_back(r);
        res.converged = true;
        last_check_e = e;
        break;
      }
      have_reduction = true;
      last_reduction_e = e;
      const double next = dt * prm.dt_decay;
      if (next < prm.dt_min) {
        r.dt_after = 0.0;
        res.reductions.push_back(r);
        last_check_e = e;
        break;
      }
      r.dt_after = next;
      res.reductions.push_back(r);
      dt = next;
      rebuild(dt);
    }
    last_check_e = e;
  }

  res.sweeps = sweeps;
  res.energy = last_check_e;
  canonicalize(psi);
  res.total_seconds = seconds_between(t_run, std::chrono::steady_clock::now());
  return res;
}

std::optional<std::pair<Index, double>> energy_monotonicity_violation(const TebdResult& result,
                                                                      double energy_tol) {
  const Index start_sweep = result.reductions.empty() ? 0 : result.reductions.front().sweep;
  const double tol = 10.0 * energy_tol;
  const CheckRecord* prev = nullptr;
  for (const CheckRecord& c : result.checks) {
    if (c.sweep < start_sweep) continue;
    if (prev != nullptr && c.energy > prev->energy + tol)
      return std::make_pair(c.sweep, c.energy - prev->energy);
    prev = &c;
  }
  return std::nullopt;
}

template struct SiteTensor<double>;
template struct SiteTensor<Complex>;
template struct SymmetricMPS<double>;
template struct SymmetricMPS<Complex>;

template SymmetricMPS<double> random_product_state<double>(const SiteStructure&, Index,
                                                           std::uint64_t);
template SymmetricMPS<Complex> random_product_state<Complex>(const SiteStructure&, Index,
                                                             std::uint64_t);
template GateStats apply_gate<double>(SymmetricMPS<double>&, Index, const TwoSiteGate&, Index,
                                      const BlockMethod&, const SectorRankRequest&);
template GateStats apply_gate<Complex>(SymmetricMPS<Complex>&, Index, const TwoSiteGate&, Index,
                                       const BlockMethod&, const SectorRankRequest&);
template void canonicalize<double>(SymmetricMPS<double>&);
template void canonicalize<Complex>(SymmetricMPS<Complex>&);
template double lambda_norm_error<double>(const SymmetricMPS<double>&);
template double lambda_norm_error<Complex>(const SymmetricMPS<Complex>&);
template double isometry_error<double>(const SymmetricMPS<double>&);
template double isometry_error<Complex>(const SymmetricMPS<Complex>&);
template TebdResult run_ground_state<double>(SymmetricMPS<double>&, const Model&,
                                             const TebdParams&);
template TebdResult run_ground_state<Complex>(SymmetricMPS<Complex>&, const Model&,
                                              const TebdParams&);

}  // namespace rlftn
