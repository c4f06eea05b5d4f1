#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "rlftn/matrix_io.hpp"
#include "rlftn/report.hpp"

using namespace rlftn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli() { return RLFTN_CLI_PATH; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// minimal fast ground-state config; caller appends overrides
std::string tiny_config(const fs::path& out) {
  return "model = chain\n"
         "length = 4\n"
         "spin = 0.5\n"
         "field = 1.0\n"
         "chi = 8\n"
         "dt_start = 0.3\n"
         "dt_decay = 0.5\n"
         "dt_min = 1e-4\n"
         "energy_tol = 1e-6\n"
         "check_interval = 5\n"
         "max_sweeps = 3000\n"
         "scalar = real\n"
         "seed = 5\n"
         "out = " +
         out.string() + "\n";
}

}  // namespace

TEST_CASE("version flag and usage errors") {
  auto v = helpers::run_command(cli() + " --version");
  CHECK(v.exit_code == 0);
  CHECK(v.output.find("0.1.0") != std::string::npos);

  CHECK(helpers::run_command(cli()).exit_code == 2);               // subcommand required
  CHECK(helpers::run_command(cli() + " frobnicate").exit_code == 2);
  CHECK(helpers::run_command(cli() + " factorize --rank 2").exit_code == 2);  // missing --in
  CHECK(helpers::run_command(cli() + " run-tebd --config x --bogus").exit_code == 2);
}

TEST_CASE("factorize subcommand on a frozen matrix") {
  const fs::path dir = helpers::fresh_dir("cli_fac");
  MatrixR a = MatrixR::Zero(3, 3);
  a(0, 0) = 3.0;
  a(1, 1) = 2.0;
  a(2, 2) = 1.0;
  save_matrix_binary((dir / "m.bin").string(), a);

  const fs::path out = dir / "f";
  auto r = helpers::run_command(cli() + " factorize --in " + q(dir / "m.bin") + " --rank 2 --out " +
                                q(out));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("spectrum: 3 2") != std::string::npos);
  CHECK(slurp(out / "spectrum.csv") == "3,2\n");

  const json j = json::parse(slurp(out / "summary.json"));
  CHECK(j["rank"] == 2);
  CHECK(j["rows"] == 3);
  CHECK(j["method"] == "tsvd");
  CHECK(j["discarded_weight"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["frobenius_error"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["discarded_exact"] == true);
  CHECK(j["files"]["spectrum"] == "spectrum.csv");

  const AnyMatrix left = load_matrix((out / "left.bin").string());
  const AnyMatrix right = load_matrix((out / "right.bin").string());
  REQUIRE(std::holds_alternative<MatrixR>(left));
  CHECK(std::get<MatrixR>(left).rows() == 3);
  CHECK(std::get<MatrixR>(left).cols() == 2);
  CHECK(std::get<MatrixR>(right).rows() == 2);
  CHECK(std::get<MatrixR>(right).cols() == 3);

  fs::remove_all(dir);
}

TEST_CASE("factorize randomized path is reproducible and clips the probe") {
  const fs::path dir = helpers::fresh_dir("cli_facr");
  MatrixR a = MatrixR::Zero(3, 3);
  a(0, 0) = 3.0;
  a(1, 1) = 2.0;
  a(2, 2) = 1.0;
  save_matrix_binary((dir / "m.bin").string(), a);

  const std::string base = cli() + " factorize --in " + q(dir / "m.bin") +
                           " --rank 2 --method rsvd --seed 17 --out ";
  CHECK(helpers::run_command(base + q(dir / "r1")).exit_code == 0);
  CHECK(helpers::run_command(base + q(dir / "r2")).exit_code == 0);
  const std::string s1 = slurp(dir / "r1" / "spectrum.csv");
  CHECK(s1 == slurp(dir / "r2" / "spectrum.csv"));
  // probe width 2*rank exceeds the matrix side, so the sketch captures the
  // full range and the values match the exact ones up to roundoff
  double v1 = 0.0, v2 = 0.0;
  REQUIRE(std::sscanf(s1.c_str(), "%lf,%lf", &v1, &v2) == 2);
  CHECK(v1 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(v2 == doctest::Approx(2.0).epsilon(1e-12));

  fs::remove_all(dir);
}

TEST_CASE("factorize error exits") {
  const fs::path dir = helpers::fresh_dir("cli_facerr");
  MatrixR a = MatrixR::Identity(2, 2);
  save_matrix_binary((dir / "m.bin").string(), a);

  CHECK(helpers::run_command(cli() + " factorize --in " + q(dir / "m.bin") + " --rank 0")
            .exit_code == 2);
  auto missing =
      helpers::run_command(cli() + " factorize --in " + q(dir / "nope.bin") + " --rank 1");
  CHECK(missing.exit_code == 1);
  CHECK(missing.output.find("error:") != std::string::npos);

  auto js = helpers::run_command(cli() + " --error-json factorize --in " + q(dir / "nope.bin") +
                                 " --rank 1");
  CHECK(js.exit_code == 1);
  const std::size_t brace = js.output.find('{');
  REQUIRE(brace != std::string::npos);
  const json j = json::parse(js.output.substr(brace));
  CHECK(j["exit"] == 1);
  CHECK(j["error"].is_string());

  fs::remove_all(dir);
}

TEST_CASE("run-tebd writes a parseable converged report and is reproducible") {
  const fs::path dir = helpers::fresh_dir("cli_run");
  spit(dir / "run.cfg", tiny_config(dir / "cfgout"));

  auto r1 = helpers::run_command(cli() + " run-tebd --config " + q(dir / "run.cfg") +
                                 " --out " + q(dir / "runA") + " --check");
  INFO(r1.output);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output.find("report: ") != std::string::npos);
  CHECK(r1.output.find("checks passed") != std::string::npos);

  const RunReport repA = parse_run_report(slurp(dir / "runA" / "report.json"));
  CHECK(repA.converged);
  CHECK(repA.version == "0.1.0");
  CHECK(repA.seed == 5);
  CHECK(repA.config.length == 4);
  CHECK(repA.spectra.size() == 5);  // one spectrum per bond, 0..L
  CHECK(repA.observables.energy < -4.0);
  CHECK(repA.observables.norm == doctest::Approx(1.0).epsilon(1e-10));

  // identical reruns produce identical physics
  auto r2 = helpers::run_command(cli() + " run-tebd --config " + q(dir / "run.cfg") +
                                 " --out " + q(dir / "runB"));
  CHECK(r2.exit_code == 0);
  const RunReport repB = parse_run_report(slurp(dir / "runB" / "report.json"));
  CHECK(repB.observables.energy == repA.observables.energy);
  CHECK(repB.observables.magnetization == repA.observables.magnetization);
  CHECK(repB.observables.entropy == repA.observables.entropy);
  CHECK(repB.spectra == repA.spectra);
  CHECK(repB.convergence.sweeps == repA.convergence.sweeps);

  // RLFTN_OUT beats --out
  auto r3 = helpers::run_command("RLFTN_OUT=" + q(dir / "envout") + " " + cli() +
                                 " run-tebd --config " + q(dir / "run.cfg") + " --out " +
                                 q(dir / "ignored"));
  CHECK(r3.exit_code == 0);
  CHECK(fs::exists(dir / "envout" / "report.json"));
  CHECK(!fs::exists(dir / "ignored"));

  // the method override touches only factorization; small blocks bypass the
  // sketch entirely, so the trajectory is unchanged
  auto r4 = helpers::run_command(cli() + " run-tebd --config " + q(dir / "run.cfg") +
                                 " --method rsvd --out " + q(dir / "runR"));
  CHECK(r4.exit_code == 0);
  const RunReport repR = parse_run_report(slurp(dir / "runR" / "report.json"));
  CHECK(repR.config.method == "rsvd");
  CHECK(repR.observables.energy == repA.observables.energy);

  fs::remove_all(dir);
}

TEST_CASE("run-tebd failure exits") {
  const fs::path dir = helpers::fresh_dir("cli_runerr");

  // config errors are usage errors
  spit(dir / "bad.cfg", "length = 4\nfield = 1.0\n");  // chi missing
  CHECK(helpers::run_command(cli() + " run-tebd --config " + q(dir / "bad.cfg")).exit_code == 2);
  CHECK(helpers::run_command(cli() + " run-tebd --config " + q(dir / "missing.cfg")).exit_code ==
        2);

  // a run cut off before convergence fails --check with exit 1
  std::string cfg = tiny_config(dir / "shortout");
  const std::size_t pos = cfg.find("max_sweeps = 3000\n");
  REQUIRE(pos != std::string::npos);
  cfg.replace(pos, std::string("max_sweeps = 3000\n").size(), "max_sweeps = 5\n");
  spit(dir / "short.cfg", cfg);
  auto r = helpers::run_command(cli() + " run-tebd --config " + q(dir / "short.cfg") + " --check");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("did not converge") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("analyze fits a run report and flags trimmed input") {
  const fs::path dir = helpers::fresh_dir("cli_ana");
  spit(dir / "run.cfg", tiny_config(dir / "out"));
  REQUIRE(helpers::run_command(cli() + " run-tebd --config " + q(dir / "run.cfg")).exit_code == 0);
  const fs::path report = dir / "out" / "report.json";

  auto pw = helpers::run_command(cli() + " analyze --report " + q(report) + " --fit powerlaw");
  CHECK(pw.exit_code == 0);
  json j = json::parse(pw.output.substr(pw.output.find('{')));
  CHECK(j["fit"] == "powerlaw");
  CHECK(j["gamma"].is_number());
  CHECK(j["points"].get<int>() >= 1);

  auto cb = helpers::run_command(cli() + " analyze --report " + q(report) +
                                 " --fit calabrese --out " + q(dir / "fits"));
  CHECK(cb.exit_code == 0);
  j = json::parse(slurp(dir / "fits" / "analysis.json"));
  CHECK(j["fit"] == "calabrese");
  CHECK(j["central_charge"].is_number());
  CHECK(fs::exists(dir / "fits" / "entropy.csv"));
  CHECK(fs::exists(dir / "fits" / "spectrum.csv"));

  auto xi = helpers::run_command(cli() + " analyze --report " + q(report) + " --fit xi");
  CHECK(xi.exit_code == 0);
  j = json::parse(xi.output.substr(xi.output.find('{')));
  CHECK(j["fit"] == "xi");
  CHECK(j.contains("xi"));

  // hand-trim the report: no spectra anywhere means the powerlaw fit cannot run
  json rep = json::parse(slurp(report));
  rep["spectra"] = json::array();
  rep["observables"]["central_spectrum"] = json::array();
  spit(dir / "trimmed.json", rep.dump());
  auto bad = helpers::run_command(cli() + " analyze --report " + q(dir / "trimmed.json") +
                                  " --fit powerlaw");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("no spectrum data") != std::string::npos);

  CHECK(helpers::run_command(cli() + " analyze --report " + q(report) + " --fit nope").exit_code ==
        2);

  fs::remove_all(dir);
}

TEST_CASE("bench-compare synthetic mode writes scaling tables") {
  const fs::path dir = helpers::fresh_dir("cli_bench");
  auto r = helpers::run_command(cli() + " bench-compare --synthetic --dims 2,4 --chi 4" +
                                " --repeats 1 --seed 3 --out " + q(dir / "bench"));
  INFO(r.output);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "bench" / "synthetic.csv"));
  CHECK(fs::exists(dir / "bench" / "synthetic.json"));

  const json j = json::parse(slurp(dir / "bench" / "synthetic.json"));
  CHECK(j["chi"] == 4);
  CHECK(j["points"].size() == 2);
  CHECK(j["points"][0]["d"] == 2);
  CHECK(j["points"][1]["d"] == 4);
  CHECK(j["points"][0]["T_det_per_call"].get<double>() > 0.0);

  const std::string csv = slurp(dir / "bench" / "synthetic.csv");
  CHECK(csv.rfind("d,chi,rows,repeats,", 0) == 0);

  CHECK(helpers::run_command(cli() + " bench-compare --synthetic --config x").exit_code == 2);
  CHECK(helpers::run_command(cli() + " bench-compare").exit_code == 2);

  fs::remove_all(dir);
}
