#pragma once

#include <vector>

#include "rlftn/factorize.hpp"
#include "rlftn/types.hpp"

namespace rlftn {

/// Symmetry sector label.  For the parity-symmetric models this is 0 (even)
/// or 1 (odd), but nothing below assumes a particular range beyond
/// non-negativity and uniqueness within one matrix.
using SectorId = int;

/// Block-diagonal matrix: one dense block per symmetry sector.  Sector order
/// is whatever the producer chose; operations must not depend on it.
template <class Scalar>
struct BlockDiagMatrix {
  std::vector<SectorId> charges;
  std::vector<Matrix<Scalar>> blocks;

  Index sector_count() const { return static_cast<Index>(blocks.size()); }
  double squared_norm() const {
    double w = 0.0;
    for (const auto& b : blocks) w += b.squaredNorm();
    return w;
  }
};

enum class RankPolicy {
  per_sector_estimate,  // chi'_s = ceil(chi / N) + slack, clipped to the block
  maximal,              // chi'_s = min(chi, block dimension)
};

/// How many candidate values to compute per sector before the global
/// post-selection.  slack < 0 selects the default max(2, ceil(0.05 * chi/N)).
struct SectorRankRequest {
  RankPolicy policy = RankPolicy::per_sector_estimate;
  Index chi = 0;
  Index slack = -1;
};

/// Per-sector candidate ranks for the given block dimensions (min(m, n) of
/// each block).  Requests never exceed the block dimension.
std::vector<Index> sector_request(const SectorRankRequest& request,
                                  const std::vector<Index>& block_dims);

/// Factorization route for one block-diagonal compression.
struct BlockMethod {
  enum class Kind { tsvd, rsvd };
  Kind kind = Kind::tsvd;
  RsvdParams rsvd;       // rank/oversample are filled per sector; seed is the base seed
  Index rsvd_min_dim = 32;  // blocks thinner than this use the exact path

  static BlockMethod deterministic() { return {}; }
  static BlockMethod randomized(int power = 4, std::uint64_t seed = 0) {
    BlockMethod m;
    m.kind = Kind::rsvd;
    m.rsvd.power = power;
    m.rsvd.seed = seed;
    return m;
  }
};

/// Result of a block factorization: per-sector factors whose ranks sum to at
/// most chi.  Sectors losing the global post-selection entirely carry
/// rank-zero factors.
template <class Scalar>
struct BlockFactorization {
  std::vector<SectorId> charges;
  std::vector<TruncatedFactorization<Scalar>> factors;
  double discarded_weight = 0.0;
  bool discarded_exact = true;

  Index total_rank() const {
    Index r = 0;
    for (const auto& f : factors) r += f.rank();
    return r;
  }
};

/// Truncated factorization of a block-diagonal matrix.
///
/// Each sector is factorized independently to its requested candidate rank
/// (per-sector seeds derive from method.rsvd.seed and the sector charge);
/// the chi globally largest candidate values are then retained.  Exact ties
/// are broken toward the lower SectorId, then the lower in-sector index, so
/// the outcome does not depend on sector ordering.
template <class Scalar>
BlockFactorization<Scalar> block_factorize(const BlockDiagMatrix<Scalar>& a, Index chi,
                                           const SectorRankRequest& request,
                                           const BlockMethod& method);

}  // namespace rlftn
