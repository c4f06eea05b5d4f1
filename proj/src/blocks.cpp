#include "rlftn/blocks.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "rlftn/rng.hpp"

namespace rlftn {

namespace {

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

}  // namespace

std::vector<Index> sector_request(const SectorRankRequest& request,
                                  const std::vector<Index>& block_dims) {
  if (request.chi < 1) throw std::invalid_argument("sector_request: chi must be >= 1");
  const Index n = static_cast<Index>(block_dims.size());
  if (n < 1) throw std::invalid_argument("sector_request: need at least one sector");

  std::vector<Index> out(block_dims.size());
  if (request.policy == RankPolicy::maximal) {
    for (std::size_t s = 0; s < block_dims.size(); ++s)
      out[s] = std::min(request.chi, block_dims[s]);
    return out;
  }
  const Index base = ceil_div(request.chi, n);
  const Index slack = request.slack >= 0 ? request.slack : std::max<Index>(2, ceil_div(base, 20));
  for (std::size_t s = 0; s < block_dims.size(); ++s)
    out[s] = std::min(base + slack, block_dims[s]);
  return out;
}

template <class Scalar>
BlockFactorization<Scalar> block_factorize(const BlockDiagMatrix<Scalar>& a, Index chi,
                                           const SectorRankRequest& request,
                                           const BlockMethod& method) {
  if (a.blocks.size() != a.charges.size())
    throw std::invalid_argument("block_factorize: charges/blocks size mismatch");
  if (a.blocks.empty()) throw std::invalid_argument("block_factorize: no sectors");
  if (std::set<SectorId>(a.charges.begin(), a.charges.end()).size() != a.charges.size())
    throw std::invalid_argument("block_factorize: duplicate sector charge");

  SectorRankRequest req = request;
  req.chi = chi;
  std::vector<Index> dims(a.blocks.size());
  for (std::size_t s = 0; s < a.blocks.size(); ++s)
    dims[s] = std::min(a.blocks[s].rows(), a.blocks[s].cols());
  const std::vector<Index> want = sector_request(req, dims);

  BlockFactorization<Scalar> out;
  out.charges = a.charges;
  out.factors.resize(a.blocks.size());
  out.discarded_exact = true;

  for (std::size_t s = 0; s < a.blocks.size(); ++s) {
    auto& f = out.factors[s];
    if (want[s] == 0 || dims[s] == 0) {
      f.left.resize(a.blocks[s].rows(), 0);
      f.sigma.resize(0);
      f.right_adj.resize(0, a.blocks[s].cols());
      f.discarded_weight = a.blocks[s].squaredNorm();
      continue;
    }
    const bool randomized =
        method.kind == BlockMethod::Kind::rsvd && dims[s] >= method.rsvd_min_dim;
    if (randomized) {
      RsvdParams p = method.rsvd;
      p.rank = want[s];
      // A caller-provided probe width is clamped to the feasible range;
      // otherwise the probe defaults to twice the requested rank.
      p.oversample = p.oversample > 0 ? std::min(std::max(p.oversample, want[s]), dims[s])
                                      : std::min(2 * want[s], dims[s]);
      p.seed = derive_seed(method.rsvd.seed, static_cast<std::uint64_t>(a.charges[s]));
      f = rsvd(a.blocks[s], p);
      out.discarded_exact = false;
    } else {
      f = tsvd(a.blocks[s], want[s]);
    }
  }

  // Global post-selection: keep the chi largest candidate values across all
  // sectors.  Ties prefer ascending charge, then in-sector position, making
  // the retained set independent of sector order in the input.
  struct Candidate {
    double sigma;
    SectorId charge;
    Index pos;
    std::size_t sector;
  };
  std::vector<Candidate> cand;
  for (std::size_t s = 0; s < out.factors.size(); ++s)
    for (Index k = 0; k < out.factors[s].rank(); ++k)
      cand.push_back({out.factors[s].sigma[k], a.charges[s], k, s});
  std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(y.sigma, x.charge, x.pos) < std::tie(x.sigma, y.charge, y.pos);
  });

  std::vector<Index> keep(out.factors.size(), 0);
  for (std::size_t i = 0; i < cand.size() && static_cast<Index>(i) < chi; ++i)
    ++keep[cand[i].sector];

  for (std::size_t s = 0; s < out.factors.size(); ++s) {
    auto& f = out.factors[s];
    // Within a sector values are descending, so the survivors of the global
    // selection are always a prefix.
    for (Index k = keep[s]; k < f.rank(); ++k) f.discarded_weight += f.sigma[k] * f.sigma[k];
    f.left = Matrix<Scalar>(f.left.leftCols(keep[s]));
    f.sigma = VectorR(f.sigma.head(keep[s]));
    f.right_adj = Matrix<Scalar>(f.right_adj.topRows(keep[s]));
    out.discarded_weight += f.discarded_weight;
  }
  return out;
}

template BlockFactorization<double> block_factorize(const BlockDiagMatrix<double>&, Index,
                                                    const SectorRankRequest&, const BlockMethod&);
template BlockFactorization<Complex> block_factorize(const BlockDiagMatrix<Complex>&, Index,
                                                     const SectorRankRequest&, const BlockMethod&);

template struct BlockDiagMatrix<double>;
template struct BlockDiagMatrix<Complex>;
template struct BlockFactorization<double>;
template struct BlockFactorization<Complex>;

}  // namespace rlftn
