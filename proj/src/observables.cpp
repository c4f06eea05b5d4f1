#include "rlftn/observables.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rlftn {

namespace {

double real_part(double x) { return x; }
double real_part(const Complex& x) { return x.real(); }

// Per-sector bond environment; entry [a] may be empty when the sector is.
template <class Scalar>
using SectorPair = std::array<Matrix<Scalar>, 2>;

template <class Scalar>
Matrix<Scalar> a_block(const SymmetricMPS<Scalar>& psi, Index j, Index m, int a) {
  return psi.lambdas[j][a].template cast<Scalar>().asDiagonal() * psi.gammas[j].blocks[m][a];
}

template <class Scalar>
Matrix<Scalar> b_block(const SymmetricMPS<Scalar>& psi, Index j, Index m, int a) {
  return psi.gammas[j].blocks[m][a] *
         psi.lambdas[j + 1][a ^ psi.site.charges[m]].template cast<Scalar>().asDiagonal();
}

// Left environments: el[j][a] is the (bra, ket) overlap of the first j sites
// in bond sector a.  Site tensors enter as lambda * Gamma, so the lambda of
// bond j itself is not included; expectation formulas insert it explicitly.
template <class Scalar>
std::vector<SectorPair<Scalar>> left_envs(const SymmetricMPS<Scalar>& psi) {
  const Index n = psi.length();
  const Index d = psi.site.dim;
  const std::vector<int>& p = psi.site.charges;
  std::vector<SectorPair<Scalar>> el(n + 1);
  el[0][0] = Matrix<Scalar>::Identity(1, 1);
  el[0][1].resize(0, 0);
  for (Index j = 0; j < n; ++j)
    for (int b = 0; b < 2; ++b) {
      const Index nb = psi.lambdas[j + 1][b].size();
      el[j + 1][b].setZero(nb, nb);
      if (nb == 0) continue;
      for (Index m = 0; m < d; ++m) {
        const int a = b ^ p[m];
        if (psi.lambdas[j][a].size() == 0) continue;
        const Matrix<Scalar> t = a_block(psi, j, m, a);
        el[j + 1][b].noalias() += t.adjoint() * el[j][a] * t;
      }
    }
  return el;
}

// Right environments: er[j][a] is the (ket, bra) overlap of sites j..L-1 in
// bond sector a, with site tensors entering as Gamma * lambda.
template <class Scalar>
std::vector<SectorPair<Scalar>> right_envs(const SymmetricMPS<Scalar>& psi) {
  const Index n = psi.length();
  const Index d = psi.site.dim;
  const std::vector<int>& p = psi.site.charges;
  std::vector<SectorPair<Scalar>> er(n + 1);
  er[n][0] = Matrix<Scalar>::Identity(1, 1);
  er[n][1].resize(0, 0);
  for (Index j = n - 1; j >= 0; --j)
    for (int a = 0; a < 2; ++a) {
      const Index na = psi.lambdas[j][a].size();
      er[j][a].setZero(na, na);
      if (na == 0) continue;
      for (Index m = 0; m < d; ++m) {
        const int b = a ^ p[m];
        if (psi.lambdas[j + 1][b].size() == 0) continue;
        const Matrix<Scalar> t = b_block(psi, j, m, a);
        er[j][a].noalias() += t * er[j + 1][b] * t.adjoint();
      }
    }
  return er;
}

// Moves a (bra, ket) environment across site j while acting with op (of
// definite parity charge q) on the ket.  On entry the bra prefix differs
// from the ket prefix by parity shift_in, so in[a] has shape
// (n_{a ^ shift_in} x n_a); on exit the shift is shift_in ^ q.  Entries of
// op outside its charge sectors are ignored.
template <class Scalar>
SectorPair<Scalar> transfer(const SymmetricMPS<Scalar>& psi, Index j,
                            const SectorPair<Scalar>& in, int shift_in, const MatrixR& op,
                            int q) {
  const Index d = psi.site.dim;
  const std::vector<int>& p = psi.site.charges;
  const int shift_out = shift_in ^ q;
  SectorPair<Scalar> out;
  for (int b = 0; b < 2; ++b) {
    const Index nket = psi.lambdas[j + 1][b].size();
    const Index nbra = psi.lambdas[j + 1][b ^ shift_out].size();
    out[b].setZero(nbra, nket);
    if (nket == 0 || nbra == 0) continue;
    for (Index m = 0; m < d; ++m) {
      const int a = b ^ p[m];
      if (psi.lambdas[j][a].size() == 0 || psi.lambdas[j][a ^ shift_in].size() == 0) continue;
      const Matrix<Scalar> ket = a_block(psi, j, m, a);
      for (Index mp = 0; mp < d; ++mp) {
        if (op(mp, m) == 0.0 || (p[mp] ^ p[m]) != q) continue;
        const Matrix<Scalar> bra = a_block(psi, j, mp, a ^ shift_in);
        out[b].noalias() += op(mp, m) * (bra.adjoint() * in[a] * ket);
      }
    }
  }
  return out;
}

// Tr[ diag(lam) g diag(lam) e ] with g as (bra, ket) and e as (ket, bra).
template <class Scalar>
double bond_trace(const BondLambda& lam, const SectorPair<Scalar>& g,
                  const SectorPair<Scalar>& e) {
  Scalar v(0);
  for (int b = 0; b < 2; ++b) {
    if (lam[b].size() == 0) continue;
    const Matrix<Scalar> w =
        lam[b].template cast<Scalar>().asDiagonal() * g[b] * lam[b].template cast<Scalar>().asDiagonal();
    v += w.cwiseProduct(e[b].transpose()).sum();
  }
  return real_part(v);
}

template <class Scalar>
double one_site_val(const SymmetricMPS<Scalar>& psi, Index j, const MatrixR& op,
                    const SectorPair<Scalar>& envl, const SectorPair<Scalar>& envr) {
  const SectorPair<Scalar> g = transfer(psi, j, envl, 0, op, 0);
  return bond_trace(psi.lambdas[j + 1], g, envr);
}

// Un-normalized <O_j O_j2> for every jmin <= j < j2 < jmax, O of odd parity
// charge.  For each j the charged environment is pushed once across the
// window, closing at every j2 on the way.
template <class Scalar>
MatrixR pair_expectations(const SymmetricMPS<Scalar>& psi, const MatrixR& op, Index jmin,
                          Index jmax, const std::vector<SectorPair<Scalar>>& el,
                          const std::vector<SectorPair<Scalar>>& er) {
  const Index n = psi.length();
  MatrixR out = MatrixR::Zero(n, n);
  const MatrixR id = MatrixR::Identity(psi.site.dim, psi.site.dim);
  for (Index j = jmin; j + 1 < jmax; ++j) {
    SectorPair<Scalar> f = transfer(psi, j, el[j], 0, op, 1);
    for (Index j2 = j + 1; j2 < jmax; ++j2) {
      const SectorPair<Scalar> g = transfer(psi, j2, f, 1, op, 1);
      out(j, j2) = bond_trace(psi.lambdas[j2 + 1], g, er[j2 + 1]);
      if (j2 + 1 < jmax) f = transfer(psi, j2, f, 1, id, 0);
    }
  }
  return out;
}

// <theta| env_l op env_r |theta> of the two-site wavefunction on (bond,
// bond + 1), with op acting in the physical pair space.  The environments
// carry the overlap of everything outside the two sites.
template <class Scalar>
double two_site_val(const SymmetricMPS<Scalar>& psi, Index bond, const MatrixR& op,
                    const SectorPair<Scalar>& envl, const SectorPair<Scalar>& envr) {
  const Index d = psi.site.dim;
  const std::vector<int>& p = psi.site.charges;
  const std::array<Index, 2> nl{psi.lambdas[bond][0].size(), psi.lambdas[bond][1].size()};
  const std::array<Index, 2> nm{psi.lambdas[bond + 1][0].size(),
                                psi.lambdas[bond + 1][1].size()};
  const std::array<Index, 2> nr{psi.lambdas[bond + 2][0].size(),
                                psi.lambdas[bond + 2][1].size()};

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

  std::array<Matrix<Scalar>, 2> theta;
  for (int s = 0; s < 2; ++s) {
    if (nm[s] == 0) {
      theta[s].setZero(rows[s], cols[s]);
      continue;
    }
    Matrix<Scalar> astack(rows[s], nm[s]);
    Matrix<Scalar> bstack(nm[s], cols[s]);
    for (Index m = 0; m < d; ++m) {
      astack.middleRows(row_off[s][m], nl[s ^ p[m]]) =
          a_block(psi, bond, m, s ^ p[m]) *
          psi.lambdas[bond + 1][s].template cast<Scalar>().asDiagonal();
      bstack.middleCols(col_off[s][m], nr[s ^ p[m]]) = b_block(psi, bond + 1, m, s);
    }
    theta[s] = astack * bstack;
  }

  // Environment-weighted copy of theta (rows against the bra index of the
  // left environment, columns against the bra index of the right one).
  std::array<Matrix<Scalar>, 2> t = theta;
  for (int s = 0; s < 2; ++s) {
    if (rows[s] == 0 || cols[s] == 0) continue;
    for (Index m = 0; m < d; ++m) {
      const int a = s ^ p[m];
      if (nl[a] > 0)
        t[s].middleRows(row_off[s][m], nl[a]) =
            envl[a] * theta[s].middleRows(row_off[s][m], nl[a]);
    }
    for (Index m = 0; m < d; ++m) {
      const int c = s ^ p[m];
      if (nr[c] > 0)
        t[s].middleCols(col_off[s][m], nr[c]) =
            t[s].middleCols(col_off[s][m], nr[c]) * envr[c];
    }
  }

  // Apply op per pair-charge block, as in the gate update.
  std::array<std::vector<std::pair<Index, Index>>, 2> pairs;
  for (Index m1 = 0; m1 < d; ++m1)
    for (Index m2 = 0; m2 < d; ++m2) pairs[p[m1] ^ p[m2]].push_back({m1, m2});
  std::array<Matrix<Scalar>, 2> gt;
  for (int q = 0; q < 2; ++q) {
    const Index np = static_cast<Index>(pairs[q].size());
    gt[q].resize(np, np);
    for (Index i = 0; i < np; ++i)
      for (Index k = 0; k < np; ++k)
        gt[q](i, k) = static_cast<Scalar>(op(pairs[q][k].first * d + pairs[q][k].second,
                                             pairs[q][i].first * d + pairs[q][i].second));
  }
  std::array<Matrix<Scalar>, 2> ot;
  for (int sp = 0; sp < 2; ++sp) ot[sp].resize(rows[sp], cols[sp]);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) {
      const int q = a ^ c;
      const Index np = static_cast<Index>(pairs[q].size());
      const Index blk = nl[a] * nr[c];
      if (blk == 0 || np == 0) continue;
      Matrix<Scalar> tin(blk, np);
      for (Index i = 0; i < np; ++i) {
        const auto [m1, m2] = pairs[q][i];
        const int s = a ^ p[m1];
        Eigen::Map<Matrix<Scalar>>(tin.col(i).data(), nl[a], nr[c]) =
            t[s].block(row_off[s][m1], col_off[s][m2], nl[a], nr[c]);
      }
      const Matrix<Scalar> tout = tin * gt[q];
      for (Index i = 0; i < np; ++i) {
        const auto [m1, m2] = pairs[q][i];
        const int sp = a ^ p[m1];
        ot[sp].block(row_off[sp][m1], col_off[sp][m2], nl[a], nr[c]) =
            Eigen::Map<const Matrix<Scalar>>(tout.col(i).data(), nl[a], nr[c]);
      }
    }

  Scalar v(0);
  for (int s = 0; s < 2; ++s)
    if (rows[s] > 0 && cols[s] > 0) v += theta[s].conjugate().cwiseProduct(ot[s]).sum();
  return real_part(v);
}

template <class Scalar>
double checked_norm_sq(const std::vector<SectorPair<Scalar>>& el, Index n) {
  const double n2 = real_part(el[n][0](0, 0));
  if (!(n2 > 0.0)) throw std::runtime_error("observables: state has zero norm");
  return n2;
}

MatrixR summed_order_operator(const Model& model) {
  const std::vector<MatrixR> ops = order_operators(model);
  MatrixR sum = ops[0];
  for (std::size_t i = 1; i < ops.size(); ++i) sum += ops[i];
  return sum;
}

}  // namespace

template <class Scalar>
double norm_squared(const SymmetricMPS<Scalar>& psi) {
  const auto el = left_envs(psi);
  return real_part(el[psi.length()][0](0, 0));
}

template <class Scalar>
double global_parity(const SymmetricMPS<Scalar>& psi) {
  const Index d = psi.site.dim;
  MatrixR pop = MatrixR::Zero(d, d);
  for (Index m = 0; m < d; ++m) pop(m, m) = psi.site.charges[m] ? -1.0 : 1.0;
  SectorPair<Scalar> env;
  env[0] = Matrix<Scalar>::Identity(1, 1);
  env[1].resize(0, 0);
  for (Index j = 0; j < psi.length(); ++j) env = transfer(psi, j, env, 0, pop, 0);
  return real_part(env[0](0, 0)) / norm_squared(psi);
}

template <class Scalar>
double energy(const SymmetricMPS<Scalar>& psi, const Model& model) {
  const Index n = psi.length();
  if (n != site_count(model))
    throw std::invalid_argument("energy: state does not fit the model");
  const std::vector<MatrixR> bonds = bond_hamiltonians(model);
  const auto el = left_envs(psi);
  const auto er = right_envs(psi);
  const double n2 = checked_norm_sq(el, n);
  double total = 0.0;
  for (Index b = 0; b + 1 < n; ++b)
    total += two_site_val(psi, b, bonds[b], el[b], er[b + 2]);
  return total / n2;
}

template <class Scalar>
double magnetization(const SymmetricMPS<Scalar>& psi, const Model& model) {
  const Index n = psi.length();
  if (n != site_count(model))
    throw std::invalid_argument("magnetization: state does not fit the model");
  const std::vector<MatrixR> ops = order_operators(model);
  const MatrixR osum = summed_order_operator(model);
  const auto el = left_envs(psi);
  const auto er = right_envs(psi);
  const double n2 = checked_norm_sq(el, n);

  const MatrixR pe = pair_expectations(psi, osum, 0, n, el, er);
  double acc = 2.0 * pe.sum();
  if (ops.size() > 1) {
    // Same-site cross terms between the components of one site: the squares
    // of the elementary operators drop out of the k != k' sum.
    MatrixR sq = MatrixR::Zero(osum.rows(), osum.cols());
    for (const MatrixR& o : ops) sq += o * o;
    const MatrixR q = osum * osum - sq;
    for (Index j = 0; j < n; ++j) acc += one_site_val(psi, j, q, el[j], er[j + 1]);
  }
  const double nspins = static_cast<double>(ops.size()) * static_cast<double>(n);
  const double m2 = acc / (nspins * (nspins - 1.0)) / n2;
  return std::sqrt(std::max(0.0, m2));
}

template <class Scalar>
std::vector<double> order_correlations(const SymmetricMPS<Scalar>& psi, const Model& model) {
  const Index n = psi.length();
  if (n != site_count(model))
    throw std::invalid_argument("order_correlations: state does not fit the model");
  const Index first = n / 4;
  const Index size = std::max<Index>(n / 2, 1);
  const MatrixR osum = summed_order_operator(model);
  const auto el = left_envs(psi);
  const auto er = right_envs(psi);
  const double n2 = checked_norm_sq(el, n);
  const MatrixR pe = pair_expectations(psi, osum, first, first + size, el, er);

  std::vector<double> c(static_cast<std::size_t>(size), 0.0);
  for (Index r = 1; r < size; ++r) {
    double sum = 0.0;
    for (Index j = first; j + r < first + size; ++j) sum += pe(j, j + r);
    c[static_cast<std::size_t>(r)] = sum / static_cast<double>(size - r) / n2;
  }
  return c;
}

std::optional<double> correlation_length_from(const std::vector<double>& c) {
  double num = 0.0, den = 0.0;
  bool any = false;
  for (std::size_t r = 2; r < c.size(); ++r) {
    const double w = static_cast<double>(r) - 1.0;
    num += w * w * c[r];
    den += c[r];
    any = true;
  }
  if (!any || !(den > 0.0) || num < 0.0) return std::nullopt;
  return std::sqrt(num / den);
}

template <class Scalar>
std::optional<double> correlation_length(const SymmetricMPS<Scalar>& psi, const Model& model) {
  return correlation_length_from(order_correlations(psi, model));
}

double bond_entropy(const BondLambda& lambda) {
  const double total = lambda[0].squaredNorm() + lambda[1].squaredNorm();
  if (!(total > 0.0)) return 0.0;
  double s = 0.0;
  for (int a = 0; a < 2; ++a)
    for (Index i = 0; i < lambda[a].size(); ++i) {
      const double w = lambda[a][i] * lambda[a][i] / total;
      if (w > 0.0) s -= w * std::log(w);
    }
  return s;
}

template <class Scalar>
std::vector<double> entropy_profile(const SymmetricMPS<Scalar>& psi) {
  std::vector<double> s(static_cast<std::size_t>(psi.length()) + 1, 0.0);
  for (Index b = 0; b <= psi.length(); ++b)
    s[static_cast<std::size_t>(b)] = bond_entropy(psi.lambdas[b]);
  return s;
}

template <class Scalar>
std::vector<double> bond_spectrum(const SymmetricMPS<Scalar>& psi, Index b) {
  if (b < 0 || b > psi.length()) throw std::invalid_argument("bond_spectrum: bond out of range");
  std::vector<double> v;
  for (int a = 0; a < 2; ++a)
    for (Index i = 0; i < psi.lambdas[b][a].size(); ++i) v.push_back(psi.lambdas[b][a][i]);
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (!(sq > 0.0)) return {};
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

namespace {

struct Ols {
  double a = 0.0, b = 0.0, sse = 0.0;
};

// Least squares of y_k against ln(k + c), k = 1-based.
Ols log_ols(const std::vector<double>& y, double c) {
  const Index n = static_cast<Index>(y.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Index k = 0; k < n; ++k) {
    const double x = std::log(static_cast<double>(k + 1) + c);
    sx += x;
    sy += y[static_cast<std::size_t>(k)];
    sxx += x * x;
    sxy += x * y[static_cast<std::size_t>(k)];
  }
  Ols f;
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (std::abs(denom) > 0.0) {
    f.b = (dn * sxy - sx * sy) / denom;
    f.a = (sy - f.b * sx) / dn;
  } else {
    f.a = sy / dn;
  }
  for (Index k = 0; k < n; ++k) {
    const double x = std::log(static_cast<double>(k + 1) + c);
    const double r = y[static_cast<std::size_t>(k)] - (f.a + f.b * x);
    f.sse += r * r;
  }
  return f;
}

}  // namespace

PowerlawFit powerlaw_fit(const std::vector<double>& sigma, bool fix_c2) {
  std::vector<double> y;
  for (double s : sigma) {
    if (!(s > 0.0)) break;
    y.push_back(std::log(s));
  }
  PowerlawFit out;
  out.points = static_cast<Index>(y.size());
  if (y.size() < 2) return out;

  auto sse_at = [&y](double c) { return log_ols(y, c).sse; };
  double best_c = 0.0;
  if (!fix_c2) {
    // Grid over the shape ratio c = c2 / c1, then golden-section refinement
    // inside the best bracket.  c = 0 is the pure power law.
    std::vector<double> cand{0.0};
    for (int i = 0; i <= 100; ++i) cand.push_back(std::pow(10.0, -4.0 + 0.1 * i));
    std::size_t bi = 0;
    double bs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const double s = sse_at(cand[i]);
      if (s < bs) {
        bs = s;
        bi = i;
      }
    }
    double lo = bi == 0 ? 0.0 : cand[bi - 1];
    double hi = bi + 1 < cand.size() ? cand[bi + 1] : cand.back() * 10.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = sse_at(x1), f2 = sse_at(x2);
    for (int it = 0; it < 200; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = sse_at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = sse_at(x2);
      }
    }
    best_c = 0.5 * (lo + hi);
    if (sse_at(0.0) <= sse_at(best_c)) best_c = 0.0;
  }

  const Ols f = log_ols(y, best_c);
  out.gamma = -f.b;
  if (f.b != 0.0) {
    out.c1 = std::exp(f.a / f.b);
    out.c2 = best_c * out.c1;
  }
  out.rms_log_residual = std::sqrt(f.sse / static_cast<double>(y.size()));
  return out;
}

CalabreseFit calabrese_fit(const std::vector<double>& entropy, Index length) {
  if (length < 2 || static_cast<Index>(entropy.size()) != length + 1)
    throw std::invalid_argument("calabrese_fit: need one entropy entry per bond, 0..L");
  const double pi = 3.14159265358979323846;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const Index n = length - 1;
  for (Index j = 1; j < length; ++j) {
    const double x =
        std::log(static_cast<double>(length) / pi * std::sin(pi * static_cast<double>(j) /
                                                             static_cast<double>(length)));
    const double yv = entropy[static_cast<std::size_t>(j)];
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
  }
  CalabreseFit fit;
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  double slope = 0.0;
  if (std::abs(denom) > 1e-30) slope = (dn * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / dn;
  fit.central_charge = 6.0 * slope;
  fit.offset = intercept;
  double sse = 0.0;
  for (Index j = 1; j < length; ++j) {
    const double x =
        std::log(static_cast<double>(length) / pi * std::sin(pi * static_cast<double>(j) /
                                                             static_cast<double>(length)));
    const double r = entropy[static_cast<std::size_t>(j)] - (intercept + slope * x);
    sse += r * r;
  }
  fit.rms_residual = std::sqrt(sse / dn);
  return fit;
}

template <class Scalar>
Observables measure_all(const SymmetricMPS<Scalar>& psi, const Model& model) {
  Observables o;
  o.norm = std::sqrt(std::max(0.0, norm_squared(psi)));
  o.energy = energy(psi, model);
  o.magnetization = magnetization(psi, model);
  o.correlations = order_correlations(psi, model);
  o.correlation_length = correlation_length_from(o.correlations);
  o.entropy = entropy_profile(psi);
  o.central_spectrum = bond_spectrum(psi, psi.length() / 2);
  return o;
}

template double norm_squared<double>(const SymmetricMPS<double>&);
template double norm_squared<Complex>(const SymmetricMPS<Complex>&);
template double global_parity<double>(const SymmetricMPS<double>&);
template double global_parity<Complex>(const SymmetricMPS<Complex>&);
template double energy<double>(const SymmetricMPS<double>&, const Model&);
template double energy<Complex>(const SymmetricMPS<Complex>&, const Model&);
template double magnetization<double>(const SymmetricMPS<double>&, const Model&);
template double magnetization<Complex>(const SymmetricMPS<Complex>&, const Model&);
template std::vector<double> order_correlations<double>(const SymmetricMPS<double>&,
                                                        const Model&);
template std::vector<double> order_correlations<Complex>(const SymmetricMPS<Complex>&,
                                                         const Model&);
template std::optional<double> correlation_length<double>(const SymmetricMPS<double>&,
                                                          const Model&);
template std::optional<double> correlation_length<Complex>(const SymmetricMPS<Complex>&,
                                                           const Model&);
template std::vector<double> entropy_profile<double>(const SymmetricMPS<double>&);
template std::vector<double> entropy_profile<Complex>(const SymmetricMPS<Complex>&);
template std::vector<double> bond_spectrum<double>(const SymmetricMPS<double>&, Index);
template std::vector<double> bond_spectrum<Complex>(const SymmetricMPS<Complex>&, Index);
template Observables measure_all<double>(const SymmetricMPS<double>&, const Model&);
template Observables measure_all<Complex>(const SymmetricMPS<Complex>&, const Model&);

}  // namespace rlftn
