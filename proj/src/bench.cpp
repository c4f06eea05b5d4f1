#include "rlftn/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <type_traits>
#include <variant>

#include "rlftn/observables.hpp"
#include "rlftn/rng.hpp"

namespace rlftn {

namespace {

double dur(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

std::string fmt_g(double v, int prec = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

}  // namespace

double TimingLedger::compression_per_iteration() const {
  return iterations > 0 ? compression_seconds / static_cast<double>(iterations) : 0.0;
}

double TimingLedger::other_per_iteration() const {
  return iterations > 0 ? other_seconds / static_cast<double>(iterations) : 0.0;
}

Speedup speedup(double compression_det, double compression_rand, double other_det,
                double other_rand) {
  if (!(compression_det > 0.0) || !(compression_rand > 0.0))
    throw std::invalid_argument("speedup: compression times must be positive");
  if (!(other_det > 0.0) || !(other_rand > 0.0))
    throw std::invalid_argument("speedup: calibration times must be positive");
  Speedup s;
  s.f = other_rand / other_det;
  s.tau = s.f * compression_det / compression_rand;
  return s;
}

Speedup speedup(const TimingLedger& det, const TimingLedger& rand) {
  return speedup(det.compression_per_iteration(), rand.compression_per_iteration(),
                 det.other_per_iteration(), rand.other_per_iteration());
}

double geometric_mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("geometric_mean: empty input");
  double acc = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("geometric_mean: values must be positive");
    acc += std::log(v);
  }
  return std::exp(acc / static_cast<double>(values.size()));
}

std::string model_family(const Model& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        char buf[64];
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ChainModel>) {
          std::snprintf(buf, sizeof buf, "chain-S%g-L%lld", m.spin,
                        static_cast<long long>(m.length));
        } else {
          std::snprintf(buf, sizeof buf, "cylinder-W%lld-L%lld",
                        static_cast<long long>(m.width), static_cast<long long>(m.length));
        }
        return buf;
      },
      model);
}

namespace {

double model_field(const Model& model) {
  return std::visit([](const auto& m) { return m.field; }, model);
}

double model_parameter(const Model& model) {
  return std::visit(
      [](const auto& m) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ChainModel>)
          return m.spin;
        else
          return static_cast<double>(m.width);
      },
      model);
}

Index model_length(const Model& model) {
  return std::visit([](const auto& m) { return m.length; }, model);
}

double rel_delta(double a, double b) {
  const double ref = std::abs(a);
  return ref > 0.0 ? std::abs(a - b) / ref : std::abs(a - b);
}

}  // namespace

template <class Scalar>
CompareReport compare_runs(const std::vector<Model>& grid, const TebdParams& base,
                           Index repeats, std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("compare_runs: empty grid");
  if (repeats < 1) throw std::invalid_argument("compare_runs: repeats must be >= 1");
  CompareReport rep;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Model& model = grid[i];
    ComparePoint pt;
    pt.model = model;
    pt.family = model_family(model);
    pt.parameter = model_parameter(model);
    pt.length = model_length(model);
    pt.field = model_field(model);
    pt.chi = base.chi;
    const SiteStructure st = parity_structure(model);

    bool all_valid = true;
    std::vector<double> taus;
    for (Index r = 0; r < repeats; ++r) {
      PairedRun pr;
      pr.seed = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(i)),
                            static_cast<std::uint64_t>(r));
      auto run_one = [&](BlockMethod::Kind kind) {
        TebdParams p = base;
        p.method = kind;
        p.seed = pr.seed;
        SymmetricMPS<Scalar> psi =
            random_product_state<Scalar>(st, site_count(model), pr.seed);
        const TebdResult res = run_ground_state(psi, model, p);
        MethodResult mr;
        mr.converged = res.converged;
        mr.energy = res.energy;
        mr.magnetization = magnetization(psi, model);
        mr.correlation_length = correlation_length(psi, model);
        mr.sweeps = res.sweeps;
        mr.max_bond = psi.max_bond_dimension();
        mr.ledger.method = kind == BlockMethod::Kind::rsvd ? "rsvd" : "tsvd";
        mr.ledger.iterations = res.sweeps;
        mr.ledger.compression_seconds = res.factorize_seconds;
        mr.ledger.other_seconds = std::max(0.0, res.total_seconds - res.factorize_seconds);
        return mr;
      };
      pr.det = run_one(BlockMethod::Kind::tsvd);
      pr.rnd = run_one(BlockMethod::Kind::rsvd);
      pr.delta_e_rel = rel_delta(pr.det.energy, pr.rnd.energy);
      pr.delta_m_rel = rel_delta(pr.det.magnetization, pr.rnd.magnetization);
      pr.valid = pr.det.converged && pr.rnd.converged &&
                 pr.det.ledger.compression_seconds > 0.0 &&
                 pr.rnd.ledger.compression_seconds > 0.0 &&
                 pr.det.ledger.other_seconds > 0.0 && pr.rnd.ledger.other_seconds > 0.0;
      if (pr.valid) {
        pr.sp = speedup(pr.det.ledger, pr.rnd.ledger);
        taus.push_back(pr.sp.tau);
      } else {
        all_valid = false;
      }
      pt.worst_delta_e = std::max(pt.worst_delta_e, pr.delta_e_rel);
      pt.worst_delta_m = std::max(pt.worst_delta_m, pr.delta_m_rel);
      pt.runs.push_back(std::move(pr));
    }
    pt.valid = all_valid && !taus.empty();
    if (!taus.empty()) {
      pt.tau = geometric_mean(taus);
      const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
      pt.tau_spread = pt.tau > 0.0 ? (*hi - *lo) / pt.tau : 0.0;
    }
    rep.points.push_back(std::move(pt));
  }
  aggregate_families(rep);
  return rep;
}

void aggregate_families(CompareReport& report) {
  report.family_tau.clear();
  report.excluded.clear();
  for (const ComparePoint& pt : report.points)
    if (!pt.valid) report.excluded.push_back(pt.family + " h=" + fmt_g(pt.field, 6));
  std::vector<std::string> families;
  for (const ComparePoint& pt : report.points)
    if (std::find(families.begin(), families.end(), pt.family) == families.end())
      families.push_back(pt.family);
  for (const std::string& fam : families) {
    std::vector<double> taus;
    for (const ComparePoint& pt : report.points)
      if (pt.family == fam && pt.valid) taus.push_back(pt.tau);
    if (!taus.empty()) report.family_tau.emplace_back(fam, geometric_mean(taus));
  }
}

void write_compare_csv(std::ostream& out, const CompareReport& report) {
  out << "model,parameter,length,field,chi,method,repeat,energy,magnetization,xi,"
         "T_per_iter,Tbar_per_iter,tau,f,converged\n";
  for (const ComparePoint& pt : report.points)
    for (std::size_t r = 0; r < pt.runs.size(); ++r) {
      const PairedRun& pr = pt.runs[r];
      for (const MethodResult* mr : {&pr.det, &pr.rnd}) {
        out << pt.family << ',' << fmt_g(pt.parameter, 6) << ',' << pt.length << ','
            << fmt_g(pt.field, 17) << ',' << pt.chi << ',' << mr->ledger.method << ',' << r
            << ',' << fmt_g(mr->energy, 17) << ',' << fmt_g(mr->magnetization, 17) << ',';
        if (mr->correlation_length) out << fmt_g(*mr->correlation_length, 17);
        out << ',' << fmt_g(mr->ledger.compression_per_iteration(), 6) << ','
            << fmt_g(mr->ledger.other_per_iteration(), 6) << ',';
        if (pr.valid) out << fmt_g(pr.sp.tau, 6);
        out << ',';
        if (pr.valid) out << fmt_g(pr.sp.f, 6);
        out << ',' << (mr->converged ? 1 : 0) << '\n';
      }
    }
}

namespace {

// Square Gaussian blocks with 1/k column scaling: a mildly decaying spectrum
// typical of a wavefunction matrix, cheap to generate at any size.
BlockDiagMatrix<double> synthetic_block_matrix(Index n_even, Index n_odd, std::uint64_t seed) {
  BlockDiagMatrix<double> a;
  a.charges = {0, 1};
  a.blocks.resize(2);
  CounterRng rng(seed);
  const std::array<Index, 2> dims{n_even, n_odd};
  for (int s = 0; s < 2; ++s) {
    MatrixR g(dims[s], dims[s]);
    rng.fill_gaussian(g.data(), static_cast<std::size_t>(g.size()));
    for (Index k = 0; k < g.cols(); ++k) g.col(k) *= 1.0 / static_cast<double>(k + 1);
    a.blocks[s] = std::move(g);
  }
  return a;
}

std::vector<double> merged_sigma(const BlockFactorization<double>& f) {
  std::vector<double> v;
  for (const auto& fac : f.factors)
    for (Index i = 0; i < fac.sigma.size(); ++i) v.push_back(fac.sigma[i]);
  std::sort(v.rbegin(), v.rend());
  return v;
}

}  // namespace

SyntheticPoint synthetic_compare(Index d, Index chi, Index repeats, std::uint64_t seed) {
  if (d < 2 || chi < 1 || repeats < 1)
    throw std::invalid_argument("synthetic_compare: need d >= 2, chi >= 1, repeats >= 1");
  SyntheticPoint out;
  out.d = d;
  out.chi = chi;
  out.rows = d * chi;
  out.repeats = repeats;
  out.det.method = "tsvd";
  out.rnd.method = "rsvd";
  out.det.iterations = out.rnd.iterations = repeats;
  SectorRankRequest req;
  req.chi = chi;
  const std::uint64_t stream = derive_seed(seed, seed_tag::bench_matrix);
  for (Index r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const BlockDiagMatrix<double> a =
        synthetic_block_matrix(out.rows / 2, out.rows - out.rows / 2,
                               derive_seed(stream, static_cast<std::uint64_t>(2 * r)));
    const auto t1 = std::chrono::steady_clock::now();
    const BlockFactorization<double> fd = block_factorize(a, chi, req, BlockMethod::deterministic());
    const auto t2 = std::chrono::steady_clock::now();
    const BlockMethod rm =
        BlockMethod::randomized(4, derive_seed(stream, static_cast<std::uint64_t>(2 * r + 1)));
    const BlockFactorization<double> fr = block_factorize(a, chi, req, rm);
    const auto t3 = std::chrono::steady_clock::now();
    const double gen = std::max(dur(t0, t1), 1e-9);
    out.det.other_seconds += gen;
    out.rnd.other_seconds += gen;
    out.det.compression_seconds += dur(t1, t2);
    out.rnd.compression_seconds += dur(t2, t3);
    const std::vector<double> sd = merged_sigma(fd);
    const std::vector<double> sr = merged_sigma(fr);
    const std::size_t k = std::min(sd.size(), sr.size());
    for (std::size_t j = 0; j < k; ++j)
      if (sd[j] > 0.0)
        out.max_rel_sigma_err = std::max(out.max_rel_sigma_err, std::abs(sd[j] - sr[j]) / sd[j]);
  }
  out.sp = speedup(out.det, out.rnd);
  out.t_ratio = out.det.compression_per_iteration() / out.rnd.compression_per_iteration();
  return out;
}

std::vector<SyntheticPoint> d_scaling(const std::vector<Index>& dims, Index chi, Index repeats,
                                      std::uint64_t seed) {
  if (dims.empty()) throw std::invalid_argument("d_scaling: empty dimension list");
  std::vector<SyntheticPoint> out;
  out.reserve(dims.size());
  for (Index d : dims)
    out.push_back(synthetic_compare(d, chi, repeats, derive_seed(seed, static_cast<std::uint64_t>(d))));
  return out;
}

template CompareReport compare_runs<double>(const std::vector<Model>&, const TebdParams&, Index,
                                            std::uint64_t);
template CompareReport compare_runs<Complex>(const std::vector<Model>&, const TebdParams&, Index,
                                             std::uint64_t);

}  // namespace rlftn
