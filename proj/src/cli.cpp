#include "rlftn/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlftn/bench.hpp"
#include "rlftn/config.hpp"
#include "rlftn/factorize.hpp"
#include "rlftn/matrix_io.hpp"
#include "rlftn/models.hpp"
#include "rlftn/mps.hpp"
#include "rlftn/observables.hpp"
#include "rlftn/report.hpp"
#include "rlftn/rng.hpp"
#include "rlftn/types.hpp"
#include "rlftn/version.hpp"

namespace rlftn {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Flag and config mistakes exit with code 2; everything thrown as a plain
/// runtime error after validation exits with code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v, int prec = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

/// Output directory precedence: RLFTN_OUT, then --out, then the fallback
/// (the config's own out field, or a subcommand default).
std::string resolve_out(const std::string& flag_value, bool flag_given,
                        const std::string& fallback) {
  if (const char* env = std::getenv("RLFTN_OUT"); env != nullptr && *env != '\0') return env;
  if (flag_given) return flag_value;
  return fallback;
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  fs::create_directories(p);
  return p;
}

// ---------------------------------------------------------------- run-tebd

struct RunTebdOpts {
  std::string config;
  std::string out;
  std::string method;
  std::uint64_t seed = 0;
  bool check = false;
  bool out_given = false, seed_given = false, method_given = false;
};

template <class Scalar>
int run_tebd_impl(const RunConfig& cfg, const Model& model, const TebdParams& prm, bool check) {
  const SiteStructure st = parity_structure(model);
  SymmetricMPS<Scalar> psi = random_product_state<Scalar>(st, site_count(model), cfg.seed);
  const TebdResult res = run_ground_state(psi, model, prm);

  RunReport rep;
  rep.version = version_string;
  rep.config = cfg;
  rep.seed = cfg.seed;
  rep.converged = res.converged;
  rep.observables = measure_all(psi, model);
  rep.convergence = res;
  rep.timing.method = cfg.method;
  rep.timing.iterations = res.sweeps;
  rep.timing.compression_seconds = res.factorize_seconds;
  rep.timing.other_seconds = std::max(0.0, res.total_seconds - res.factorize_seconds);
  for (Index b = 0; b <= psi.length(); ++b) rep.spectra.push_back(bond_spectrum(psi, b));

  const fs::path dir = ensure_dir(cfg.out);
  write_text_file((dir / "report.json").string(), run_report_json(rep));
  write_text_file((dir / "config.txt").string(), emit_config(cfg));
  if (cfg.spectrum_dump) {
    std::string csv = "bond,sector,k,lambda\n";
    for (Index b = 0; b <= psi.length(); ++b)
      for (int s = 0; s < 2; ++s)
        for (Index k = 0; k < psi.lambdas[b][s].size(); ++k)
          csv += std::to_string(b) + "," + std::to_string(s) + "," + std::to_string(k) + "," +
                 fmt(psi.lambdas[b][s][k]) + "\n";
    write_text_file((dir / "spectra.csv").string(), csv);
  }

  std::cout << model_family(model) << " h=" << fmt(cfg.field, 10) << " chi=" << cfg.chi
            << " method=" << cfg.method << " seed=" << cfg.seed << "\n";
  std::cout << "energy = " << fmt(rep.observables.energy, 12)
            << "  magnetization = " << fmt(rep.observables.magnetization, 8)
            << "  norm = " << fmt(rep.observables.norm, 8) << "\n";
  std::cout << "sweeps = " << res.sweeps << "  converged = " << (res.converged ? "yes" : "no")
            << "  max discarded = " << fmt(res.max_discarded, 4)
            << "  wall = " << fmt(res.total_seconds, 4) << " s\n";
  const double s_mid = rep.observables.entropy.empty()
                           ? 0.0
                           : rep.observables.entropy[rep.observables.entropy.size() / 2];
  std::cout << "center entropy = " << fmt(s_mid, 8) << "  xi = "
            << (rep.observables.correlation_length ? fmt(*rep.observables.correlation_length, 8)
                                                   : std::string("n/a"))
            << "\n";
  std::cout << "report: " << (dir / "report.json").string() << "\n";

  if (check) {
    std::vector<std::string> bad;
    if (!res.converged) bad.push_back("run did not converge");
    double worst_norm = 0.0, worst_iso = 0.0;
    for (const CheckRecord& c : res.checks) {
      worst_norm = std::max(worst_norm, c.lambda_norm_error);
      worst_iso = std::max(worst_iso, c.isometry_error);
    }
    if (worst_norm > 1e-10)
      bad.push_back("bond normalization error " + fmt(worst_norm, 3) + " exceeds 1e-10");
    if (worst_iso > 1e-12) bad.push_back("isometry error " + fmt(worst_iso, 3) + " exceeds 1e-12");
    if (const auto rise = energy_monotonicity_violation(res, prm.energy_tol))
      bad.push_back("energy rose by " + fmt(rise->second, 3) + " at sweep " +
                    std::to_string(rise->first));
    if (!bad.empty()) {
      for (const std::string& b : bad) std::cerr << "check failed: " << b << "\n";
      return 1;
    }
    std::cout << "checks passed\n";
  }
  return 0;
}

int cmd_run_tebd(const RunTebdOpts& o) {
  RunConfig cfg;
  Model model = ChainModel{};
  TebdParams prm;
  try {
    cfg = parse_config(o.config);
    if (o.seed_given) cfg.seed = o.seed;
    if (o.method_given) cfg.method = o.method;
    cfg.out = resolve_out(o.out, o.out_given, cfg.out);
    model = cfg.make_model();
    prm = cfg.make_params();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (cfg.scalar == "real") return run_tebd_impl<double>(cfg, model, prm, o.check);
  return run_tebd_impl<Complex>(cfg, model, prm, o.check);
}

// --------------------------------------------------------------- factorize

struct FactorizeOpts {
  std::string in;
  std::string out;
  std::string method = "tsvd";
  long long rank = 0;
  long long oversample = 0;
  int power = 4;
  std::uint64_t seed = 1;
  bool out_given = false;
};

int cmd_factorize(const FactorizeOpts& o) {
  if (o.rank < 1) throw UsageError("--rank must be at least 1");
  if (o.power < 0) throw UsageError("--power must be nonnegative");
  const AnyMatrix any = load_matrix(o.in);
  const fs::path dir = ensure_dir(resolve_out(o.out, o.out_given, "factors"));

  return std::visit(
      [&](const auto& a) -> int {
        using Scalar = typename std::decay_t<decltype(a)>::Scalar;
        const Index max_rank = std::min(a.rows(), a.cols());
        const Index rank = std::min<Index>(o.rank, max_rank);
        TruncatedFactorization<Scalar> f;
        if (o.method == "rsvd") {
          RsvdParams p;
          p.rank = rank;
          p.oversample = o.oversample;
          p.power = o.power;
          p.seed = derive_seed(o.seed, seed_tag::rsvd_stream);
          f = rsvd(a, p);
        } else {
          f = tsvd(a, rank);
        }
        const double fro = reconstruction_error(a, f);

        std::string spectrum;
        for (Index k = 0; k < f.sigma.size(); ++k) {
          if (k > 0) spectrum += ',';
          spectrum += fmt(f.sigma[k]);
        }
        write_text_file((dir / "spectrum.csv").string(), spectrum + "\n");
        save_matrix_binary((dir / "left.bin").string(), f.left);
        save_matrix_binary((dir / "right.bin").string(), f.right_adj);

        Json j;
        j["rows"] = a.rows();
        j["cols"] = a.cols();
        j["complex"] = is_complex_v<Scalar>;
        j["requested_rank"] = o.rank;
        j["rank"] = f.rank();
        j["method"] = o.method;
        if (o.method == "rsvd") {
          j["oversample"] = o.oversample;
          j["power"] = o.power;
          j["seed"] = o.seed;
        }
        j["discarded_weight"] = f.discarded_weight;
        j["discarded_exact"] = f.discarded_exact;
        j["frobenius_error"] = fro;
        j["files"] = Json{{"spectrum", "spectrum.csv"},
                          {"left", "left.bin"},
                          {"right", "right.bin"}};
        write_text_file((dir / "summary.json").string(), j.dump(2) + "\n");

        std::cout << o.method << " rank " << f.rank() << " of " << a.rows() << "x" << a.cols()
                  << ": discarded weight = " << fmt(f.discarded_weight, 6)
                  << ", frobenius error = " << fmt(fro, 6) << "\n";
        std::cout << "spectrum:";
        for (Index k = 0; k < std::min<Index>(f.sigma.size(), 8); ++k)
          std::cout << ' ' << fmt(f.sigma[k], 6);
        if (f.sigma.size() > 8) std::cout << " ...";
        std::cout << "\nwrote " << (dir / "summary.json").string() << "\n";
        return 0;
      },
      any);
}

// ----------------------------------------------------------- bench-compare

struct BenchOpts {
  std::string config;
  std::string out;
  std::vector<double> fields;
  long long repeats = -1;  // -1 = per-mode default (2 grid, 3 synthetic)
  long long jobs = 1;
  std::uint64_t seed = 1;
  double tol_e = 1e-8;
  double tol_m = 1e-6;
  bool synthetic = false;
  bool check = false;
  std::vector<long long> dims;
  long long chi = 64;
  bool out_given = false, seed_given = false;
};

template <class Scalar>
CompareReport bench_grid(const std::vector<Model>& grid, const TebdParams& base, Index repeats,
                         std::uint64_t seed, Index jobs) {
  if (jobs <= 1 || grid.size() <= 1) return compare_runs<Scalar>(grid, base, repeats, seed);

  // Points run concurrently; the per-point master seed derive_seed(seed, i)
  // makes every substream identical to the serial full-grid call (tag 0 is
  // the identity split), so results do not depend on scheduling.
  std::vector<CompareReport> parts(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= grid.size()) return;
      try {
        parts[i] = compare_runs<Scalar>({grid[i]}, base, repeats,
                                        derive_seed(seed, static_cast<std::uint64_t>(i)));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), grid.size());
  pool.reserve(n_workers);
  for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  CompareReport rep;
  for (CompareReport& part : parts)
    for (ComparePoint& pt : part.points) rep.points.push_back(std::move(pt));
  aggregate_families(rep);
  return rep;
}

int bench_synthetic(const BenchOpts& o) {
  std::vector<Index> dims(o.dims.begin(), o.dims.end());
  if (dims.empty()) dims = {8, 16, 32};
  for (Index d : dims)
    if (d < 2) throw UsageError("--dims entries must be at least 2");
  if (o.chi < 1) throw UsageError("--chi must be at least 1");
  const Index repeats = o.repeats < 0 ? 3 : static_cast<Index>(o.repeats);
  if (repeats < 1) throw UsageError("--repeats must be at least 1");

  const std::vector<SyntheticPoint> pts = d_scaling(dims, o.chi, repeats, o.seed);

  const fs::path dir = ensure_dir(resolve_out(o.out, o.out_given, "bench"));
  std::string csv =
      "d,chi,rows,repeats,T_det_per_call,T_rnd_per_call,t_ratio,tau,f,max_rel_sigma_err\n";
  Json jpts = Json::array();
  for (const SyntheticPoint& p : pts) {
    csv += std::to_string(p.d) + "," + std::to_string(p.chi) + "," + std::to_string(p.rows) +
           "," + std::to_string(p.repeats) + "," + fmt(p.det.compression_per_iteration()) + "," +
           fmt(p.rnd.compression_per_iteration()) + "," + fmt(p.t_ratio) + "," + fmt(p.sp.tau) +
           "," + fmt(p.sp.f) + "," + fmt(p.max_rel_sigma_err) + "\n";
    Json e;
    e["d"] = p.d;
    e["chi"] = p.chi;
    e["rows"] = p.rows;
    e["repeats"] = p.repeats;
    e["T_det_per_call"] = p.det.compression_per_iteration();
    e["T_rnd_per_call"] = p.rnd.compression_per_iteration();
    e["t_ratio"] = p.t_ratio;
    e["tau"] = p.sp.tau;
    e["f"] = p.sp.f;
    e["max_rel_sigma_err"] = p.max_rel_sigma_err;
    jpts.push_back(std::move(e));
  }
  write_text_file((dir / "synthetic.csv").string(), csv);

  // Least-squares slope of the compression-time ratio against d.
  double slope = 0.0;
  if (pts.size() >= 2) {
    double md = 0.0, mr = 0.0;
    for (const SyntheticPoint& p : pts) {
      md += static_cast<double>(p.d);
      mr += p.t_ratio;
    }
    md /= static_cast<double>(pts.size());
    mr /= static_cast<double>(pts.size());
    double num = 0.0, den = 0.0;
    for (const SyntheticPoint& p : pts) {
      num += (static_cast<double>(p.d) - md) * (p.t_ratio - mr);
      den += (static_cast<double>(p.d) - md) * (static_cast<double>(p.d) - md);
    }
    slope = den > 0.0 ? num / den : 0.0;
  }
  bool increasing = true;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].t_ratio <= pts[i - 1].t_ratio) increasing = false;

  Json j;
  j["chi"] = o.chi;
  j["repeats"] = repeats;
  j["seed"] = o.seed;
  j["ratio_slope_per_d"] = slope;
  j["strictly_increasing"] = increasing;
  j["points"] = std::move(jpts);
  write_text_file((dir / "synthetic.json").string(), j.dump(2) + "\n");

  for (const SyntheticPoint& p : pts)
    std::cout << "d=" << p.d << " rows=" << p.rows
              << "  T_det=" << fmt(p.det.compression_per_iteration(), 4)
              << "  T_rnd=" << fmt(p.rnd.compression_per_iteration(), 4)
              << "  ratio=" << fmt(p.t_ratio, 4) << "  tau=" << fmt(p.sp.tau, 4)
              << "  sigma err=" << fmt(p.max_rel_sigma_err, 3) << "\n";
  std::cout << "ratio slope vs d = " << fmt(slope, 4)
            << "; strictly increasing: " << (increasing ? "yes" : "no") << "\n";
  std::cout << "wrote " << (dir / "synthetic.csv").string() << ", "
            << (dir / "synthetic.json").string() << "\n";

  if (o.check) {
    std::vector<std::string> bad;
    for (const SyntheticPoint& p : pts)
      if (p.max_rel_sigma_err > 1e-6)
        bad.push_back("singular values at d=" + std::to_string(p.d) + " deviate by " +
                      fmt(p.max_rel_sigma_err, 3));
    if (!increasing) bad.push_back("compression-time ratio is not strictly increasing in d");
    if (!bad.empty()) {
      for (const std::string& b : bad) std::cerr << "check failed: " << b << "\n";
      return 1;
    }
    std::cout << "checks passed\n";
  }
  return 0;
}

int cmd_bench(const BenchOpts& o) {
  if (o.synthetic) {
    if (!o.config.empty())
      throw UsageError("--synthetic and --config are mutually exclusive");
    return bench_synthetic(o);
  }
  if (o.config.empty()) throw UsageError("bench-compare needs --config (or --synthetic)");
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");
  const Index repeats = o.repeats < 0 ? 2 : static_cast<Index>(o.repeats);
  if (repeats < 1) throw UsageError("--repeats must be at least 1");

  RunConfig cfg;
  TebdParams base;
  std::vector<Model> grid;
  std::vector<double> fields;
  try {
    cfg = parse_config(o.config);
    if (o.seed_given) cfg.seed = o.seed;
    fields = o.fields.empty() ? std::vector<double>{cfg.field} : o.fields;
    base = cfg.make_params();
    for (double h : fields) {
      RunConfig at = cfg;
      at.field = h;
      grid.push_back(at.make_model());
    }
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }

  const CompareReport rep =
      cfg.scalar == "real"
          ? bench_grid<double>(grid, base, repeats, cfg.seed, static_cast<Index>(o.jobs))
          : bench_grid<Complex>(grid, base, repeats, cfg.seed, static_cast<Index>(o.jobs));

  const fs::path dir = ensure_dir(resolve_out(o.out, o.out_given, cfg.out));
  {
    std::ofstream csv(dir / "compare.csv");
    if (!csv) throw std::runtime_error("cannot open for writing: " + (dir / "compare.csv").string());
    write_compare_csv(csv, rep);
  }
  write_text_file((dir / "compare.json").string(), compare_report_json(rep));

  for (const ComparePoint& pt : rep.points) {
    std::cout << pt.family << " h=" << fmt(pt.field, 10) << ": ";
    if (pt.valid)
      std::cout << "tau = " << fmt(pt.tau, 4) << " (spread " << fmt(pt.tau_spread, 3) << ")";
    else
      std::cout << "EXCLUDED (unconverged run)";
    std::cout << "  worst dE = " << fmt(pt.worst_delta_e, 3)
              << "  worst dM = " << fmt(pt.worst_delta_m, 3) << "\n";
  }
  for (const auto& [fam, tau] : rep.family_tau)
    std::cout << "family " << fam << ": geometric mean tau = " << fmt(tau, 4)
              << " (nominal uncertainty " << fmt(rep.nominal_uncertainty * 100.0, 3) << "%)\n";
  for (const std::string& label : rep.excluded) std::cout << "excluded: " << label << "\n";
  std::cout << "wrote " << (dir / "compare.csv").string() << ", "
            << (dir / "compare.json").string() << "\n";

  if (o.check) {
    std::vector<std::string> bad;
    for (const ComparePoint& pt : rep.points) {
      const std::string label = pt.family + " h=" + fmt(pt.field, 6);
      if (!pt.valid) bad.push_back(label + ": a run did not converge");
      if (pt.worst_delta_e > o.tol_e)
        bad.push_back(label + ": |dE/E| = " + fmt(pt.worst_delta_e, 3) + " exceeds " +
                      fmt(o.tol_e, 3));
      if (pt.worst_delta_m > o.tol_m)
        bad.push_back(label + ": |dM/M| = " + fmt(pt.worst_delta_m, 3) + " exceeds " +
                      fmt(o.tol_m, 3));
    }
    if (!bad.empty()) {
      for (const std::string& b : bad) std::cerr << "check failed: " << b << "\n";
      return 1;
    }
    std::cout << "checks passed\n";
  }
  return 0;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOpts {
  std::string report;
  std::string fit;
  std::string out;
  bool fix_c2 = false;
  bool out_given = false;
};

int cmd_analyze(const AnalyzeOpts& o) {
  const RunReport rep = parse_run_report(read_text_file(o.report));

  Json out;
  if (o.fit == "powerlaw") {
    const std::vector<double>& sig = !rep.spectra.empty() ? rep.spectra[rep.spectra.size() / 2]
                                                          : rep.observables.central_spectrum;
    if (sig.empty())
      throw std::runtime_error("report has no spectrum data; a powerlaw fit needs the "
                               "central bond spectrum");
    const PowerlawFit f = powerlaw_fit(sig, o.fix_c2);
    out["fit"] = "powerlaw";
    out["gamma"] = f.gamma;
    out["c1"] = f.c1;
    out["c2"] = f.c2;
    out["rms_log_residual"] = f.rms_log_residual;
    out["points"] = f.points;
  } else if (o.fit == "calabrese") {
    const std::vector<double>& s = rep.observables.entropy;
    if (s.size() < 3)
      throw std::runtime_error("report has no entropy profile; a Calabrese fit needs "
                               "per-bond entropies");
    const CalabreseFit f = calabrese_fit(s, static_cast<Index>(s.size()) - 1);
    out["fit"] = "calabrese";
    out["central_charge"] = f.central_charge;
    out["offset"] = f.offset;
    out["rms_residual"] = f.rms_residual;
  } else {  // xi
    const std::vector<double>& c = rep.observables.correlations;
    if (c.empty())
      throw std::runtime_error("report has no correlation data; a correlation length "
                               "needs order correlations");
    const std::optional<double> xi = correlation_length_from(c);
    out["fit"] = "xi";
    out["xi"] = xi ? Json(*xi) : Json(nullptr);
    out["distances"] = c.size();
  }

  const std::string text = out.dump(2) + "\n";
  std::cout << text;

  if (o.out_given || std::getenv("RLFTN_OUT") != nullptr) {
    const fs::path dir = ensure_dir(resolve_out(o.out, o.out_given, "analysis"));
    write_text_file((dir / "analysis.json").string(), text);
    const std::vector<double>& sig = !rep.spectra.empty() ? rep.spectra[rep.spectra.size() / 2]
                                                          : rep.observables.central_spectrum;
    if (!sig.empty()) {
      std::string csv = "k,sigma\n";
      for (std::size_t k = 0; k < sig.size(); ++k)
        csv += std::to_string(k + 1) + "," + fmt(sig[k]) + "\n";
      write_text_file((dir / "spectrum.csv").string(), csv);
    }
    if (!rep.observables.entropy.empty()) {
      std::string csv = "bond,entropy\n";
      for (std::size_t b = 0; b < rep.observables.entropy.size(); ++b)
        csv += std::to_string(b) + "," + fmt(rep.observables.entropy[b]) + "\n";
      write_text_file((dir / "entropy.csv").string(), csv);
    }
    if (!rep.observables.correlations.empty()) {
      std::string csv = "distance,correlation\n";
      for (std::size_t r = 0; r < rep.observables.correlations.size(); ++r)
        csv += std::to_string(r) + "," + fmt(rep.observables.correlations[r]) + "\n";
      write_text_file((dir / "correlations.csv").string(), csv);
    }
    std::cout << "wrote " << (dir / "analysis.json").string() << "\n";
  }
  return 0;
}

int fail_with(bool error_json, const std::string& msg, int code) {
  std::cerr << "error: " << msg << "\n";
  if (error_json) {
    Json j;
    j["error"] = msg;
    j["exit"] = code;
    std::cout << j.dump() << "\n";
  }
  return code;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Low-rank factorization engine with an imaginary-time MPS ground-state solver"};
  app.set_version_flag("--version", std::string(version_string));
  bool error_json = false;
  app.add_flag("--error-json", error_json,
               "On failure, also print a machine-readable error object to stdout");
  app.require_subcommand(1);

  RunTebdOpts ro;
  CLI::App* run = app.add_subcommand("run-tebd", "Run one ground-state simulation");
  run->add_option("--config", ro.config, "Config file (key = value format)")->required();
  run->add_option("--seed", ro.seed, "Master seed override");
  run->add_option("--out", ro.out, "Output directory override (RLFTN_OUT takes precedence)");
  run->add_option("--method", ro.method, "Factorization method override")
      ->check(CLI::IsMember({"tsvd", "rsvd"}));
  run->add_flag("--check", ro.check,
                "Verify convergence, bond normalization (1e-10), isometries (1e-12), and "
                "energy monotonicity; exit 1 on violation");

  FactorizeOpts fo;
  CLI::App* fac = app.add_subcommand("factorize", "Truncated factorization of a matrix file");
  fac->add_option("--in", fo.in, "Input matrix (binary container or CSV)")->required();
  fac->add_option("--rank", fo.rank, "Retained rank")->required();
  fac->add_option("--method", fo.method, "tsvd or rsvd")
      ->check(CLI::IsMember({"tsvd", "rsvd"}))
      ->capture_default_str();
  fac->add_option("--oversample", fo.oversample, "Probe columns beyond the rank (0 = twice the rank)")
      ->capture_default_str();
  fac->add_option("--power", fo.power, "Power iterations")->capture_default_str();
  fac->add_option("--seed", fo.seed, "Master seed (rsvd)")->capture_default_str();
  fac->add_option("--out", fo.out, "Output directory (default factors)");

  BenchOpts bo;
  CLI::App* ben = app.add_subcommand("bench-compare", "Timed tsvd/rsvd comparisons");
  ben->add_option("--config", bo.config, "Base config; the grid varies its field");
  ben->add_option("--fields", bo.fields, "Comma-separated field values (default: config's)")
      ->delimiter(',');
  ben->add_option("--repeats", bo.repeats, "Repeats per grid point (default 2, synthetic 3)");
  ben->add_option("--jobs", bo.jobs, "Concurrent grid points (default 1 to keep timings clean)")
      ->capture_default_str();
  ben->add_option("--seed", bo.seed, "Master seed override")->capture_default_str();
  ben->add_flag("--synthetic", bo.synthetic, "Time bare factorizations on synthetic matrices");
  ben->add_option("--dims", bo.dims, "Synthetic physical dimensions (default 8,16,32)")
      ->delimiter(',');
  ben->add_option("--chi", bo.chi, "Synthetic retained rank")->capture_default_str();
  ben->add_option("--tol-e", bo.tol_e, "--check bound on |dE/E|")->capture_default_str();
  ben->add_option("--tol-m", bo.tol_m, "--check bound on |dM/M|")->capture_default_str();
  ben->add_option("--out", bo.out, "Output directory (default: config's, synthetic: bench)");
  ben->add_flag("--check", bo.check,
                "Verify convergence and method agreement (synthetic: spectra and scaling); "
                "exit 1 on violation");

  AnalyzeOpts ao;
  CLI::App* ana = app.add_subcommand("analyze", "Fits and plot-ready tables from a run report");
  ana->add_option("--report", ao.report, "report.json produced by run-tebd")->required();
  ana->add_option("--fit", ao.fit, "powerlaw, calabrese, or xi")
      ->required()
      ->check(CLI::IsMember({"powerlaw", "calabrese", "xi"}));
  ana->add_flag("--fix-c2", ao.fix_c2, "Pin the powerlaw offset c2 to 0");
  ana->add_option("--out", ao.out, "Also write analysis.json and CSV tables here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ro.seed_given = run->count("--seed") > 0;
  ro.out_given = run->count("--out") > 0;
  ro.method_given = run->count("--method") > 0;
  fo.out_given = fac->count("--out") > 0;
  bo.seed_given = ben->count("--seed") > 0;
  bo.out_given = ben->count("--out") > 0;
  ao.out_given = ana->count("--out") > 0;

  try {
    if (app.got_subcommand(run)) return cmd_run_tebd(ro);
    if (app.got_subcommand(fac)) return cmd_factorize(fo);
    if (app.got_subcommand(ben)) return cmd_bench(bo);
    return cmd_analyze(ao);
  } catch (const UsageError& e) {
    return fail_with(error_json, e.what(), 2);
  } catch (const std::exception& e) {
    return fail_with(error_json, e.what(), 1);
  }
}

}  // namespace rlftn
