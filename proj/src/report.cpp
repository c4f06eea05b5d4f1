#include "rlftn/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rlftn {

namespace {

using Json = nlohmann::ordered_json;

Json config_json(const RunConfig& c) {
  Json j;
  j["model"] = c.model;
  j["spin"] = c.spin;
  j["width"] = c.width;
  j["length"] = c.length;
  j["field"] = c.field;
  j["chi"] = c.chi;
  j["method"] = c.method;
  j["oversample"] = c.oversample;
  j["power"] = c.power;
  j["rsvd_min_dim"] = c.rsvd_min_dim;
  j["dt_start"] = c.dt_start;
  j["dt_decay"] = c.dt_decay;
  j["dt_min"] = c.dt_min;
  j["energy_tol"] = c.energy_tol;
  j["check_interval"] = c.check_interval;
  j["max_sweeps"] = c.max_sweeps;
  j["gate_form"] = c.gate_form;
  j["schmidt_tol"] = c.schmidt_tol;
  j["sector_slack"] = c.sector_slack;
  j["scalar"] = c.scalar;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["collect_audit"] = c.collect_audit;
  j["spectrum_dump"] = c.spectrum_dump;
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  c.model = j.at("model").get<std::string>();
  c.spin = j.at("spin").get<double>();
  c.width = j.at("width").get<Index>();
  c.length = j.at("length").get<Index>();
  c.field = j.at("field").get<double>();
  c.chi = j.at("chi").get<Index>();
  c.method = j.at("method").get<std::string>();
  c.oversample = j.at("oversample").get<Index>();
  c.power = j.at("power").get<int>();
  c.rsvd_min_dim = j.at("rsvd_min_dim").get<Index>();
  c.dt_start = j.at("dt_start").get<double>();
  c.dt_decay = j.at("dt_decay").get<double>();
  c.dt_min = j.at("dt_min").get<double>();
  c.energy_tol = j.at("energy_tol").get<double>();
  c.check_interval = j.at("check_interval").get<Index>();
  c.max_sweeps = j.at("max_sweeps").get<Index>();
  c.gate_form = j.at("gate_form").get<std::string>();
  c.schmidt_tol = j.at("schmidt_tol").get<double>();
  c.sector_slack = j.at("sector_slack").get<Index>();
  c.scalar = j.at("scalar").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.out = j.at("out").get<std::string>();
  c.collect_audit = j.at("collect_audit").get<bool>();
  c.spectrum_dump = j.at("spectrum_dump").get<bool>();
  return c;
}

Json observables_json(const Observables& o) {
  Json j;
  j["norm"] = o.norm;
  j["energy"] = o.energy;
  j["magnetization"] = o.magnetization;
  if (o.correlation_length) {
    j["correlation_length"] = *o.correlation_length;
  } else {
    j["correlation_length"] = nullptr;
  }
  j["entropy"] = o.entropy;
  j["central_spectrum"] = o.central_spectrum;
  j["correlations"] = o.correlations;
  return j;
}

Observables observables_from_json(const Json& j) {
  Observables o;
  o.norm = j.at("norm").get<double>();
  o.energy = j.at("energy").get<double>();
  o.magnetization = j.at("magnetization").get<double>();
  const Json& xi = j.at("correlation_length");
  if (!xi.is_null()) o.correlation_length = xi.get<double>();
  o.entropy = j.at("entropy").get<std::vector<double>>();
  o.central_spectrum = j.at("central_spectrum").get<std::vector<double>>();
  o.correlations = j.at("correlations").get<std::vector<double>>();
  return o;
}

Json convergence_json(const TebdResult& r) {
  Json j;
  j["converged"] = r.converged;
  j["energy"] = r.energy;
  j["sweeps"] = r.sweeps;
  j["factorize_calls"] = r.factorize_calls;
  j["factorize_seconds"] = r.factorize_seconds;
  j["total_seconds"] = r.total_seconds;
  j["max_discarded"] = r.max_discarded;
  Json checks = Json::array();
  for (const CheckRecord& c : r.checks) {
    Json e;
    e["sweep"] = c.sweep;
    e["dt"] = c.dt;
    e["energy"] = c.energy;
    e["max_discarded"] = c.max_discarded;
    e["max_bond"] = c.max_bond;
    e["lambda_norm_error"] = c.lambda_norm_error;
    e["isometry_error"] = c.isometry_error;
    e["elapsed_seconds"] = c.elapsed_seconds;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  Json reductions = Json::array();
  for (const ReductionRecord& d : r.reductions) {
    Json e;
    e["sweep"] = d.sweep;
    e["dt_before"] = d.dt_before;
    e["dt_after"] = d.dt_after;
    e["energy"] = d.energy;
    reductions.push_back(std::move(e));
  }
  j["reductions"] = std::move(reductions);
  return j;
}

TebdResult convergence_from_json(const Json& j) {
  TebdResult r;
  r.converged = j.at("converged").get<bool>();
  r.energy = j.at("energy").get<double>();
  r.sweeps = j.at("sweeps").get<Index>();
  r.factorize_calls = j.at("factorize_calls").get<Index>();
  r.factorize_seconds = j.at("factorize_seconds").get<double>();
  r.total_seconds = j.at("total_seconds").get<double>();
  r.max_discarded = j.at("max_discarded").get<double>();
  for (const Json& e : j.at("checks")) {
    CheckRecord c;
    c.sweep = e.at("sweep").get<Index>();
    c.dt = e.at("dt").get<double>();
    c.energy = e.at("energy").get<double>();
    c.max_discarded = e.at("max_discarded").get<double>();
    c.max_bond = e.at("max_bond").get<Index>();
    c.lambda_norm_error = e.at("lambda_norm_error").get<double>();
    c.isometry_error = e.at("isometry_error").get<double>();
    c.elapsed_seconds = e.at("elapsed_seconds").get<double>();
    r.checks.push_back(c);
  }
  for (const Json& e : j.at("reductions")) {
    ReductionRecord d;
    d.sweep = e.at("sweep").get<Index>();
    d.dt_before = e.at("dt_before").get<double>();
    d.dt_after = e.at("dt_after").get<double>();
    d.energy = e.at("energy").get<double>();
    r.reductions.push_back(d);
  }
  return r;
}

Json timing_json(const TimingLedger& t) {
  Json j;
  j["method"] = t.method;
  j["iterations"] = t.iterations;
  j["compression_seconds"] = t.compression_seconds;
  j["other_seconds"] = t.other_seconds;
  return j;
}

TimingLedger timing_from_json(const Json& j) {
  TimingLedger t;
  t.method = j.at("method").get<std::string>();
  t.iterations = j.at("iterations").get<Index>();
  t.compression_seconds = j.at("compression_seconds").get<double>();
  t.other_seconds = j.at("other_seconds").get<double>();
  return t;
}

Json method_result_json(const MethodResult& m) {
  Json j;
  j["converged"] = m.converged;
  j["energy"] = m.energy;
  j["magnetization"] = m.magnetization;
  if (m.correlation_length) {
    j["correlation_length"] = *m.correlation_length;
  } else {
    j["correlation_length"] = nullptr;
  }
  j["sweeps"] = m.sweeps;
  j["max_bond"] = m.max_bond;
  j["timing"] = timing_json(m.ledger);
  return j;
}

}  // namespace

std::string run_report_json(const RunReport& report) {
  Json j;
  j["version"] = report.version;
  j["seed"] = report.seed;
  j["converged"] = report.converged;
  j["config"] = config_json(report.config);
  j["observables"] = observables_json(report.observables);
  j["convergence"] = convergence_json(report.convergence);
  j["timing"] = timing_json(report.timing);
  j["spectra"] = report.spectra;
  return j.dump(2) + "\n";
}

RunReport parse_run_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("run report: ") + e.what());
  }
  try {
    RunReport r;
    r.version = j.at("version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.converged = j.at("converged").get<bool>();
    r.config = config_from_json(j.at("config"));
    r.observables = observables_from_json(j.at("observables"));
    r.convergence = convergence_from_json(j.at("convergence"));
    r.timing = timing_from_json(j.at("timing"));
    if (j.contains("spectra"))
      r.spectra = j.at("spectra").get<std::vector<std::vector<double>>>();
    return r;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("run report: ") + e.what());
  }
}

std::string compare_report_json(const CompareReport& report) {
  Json j;
  j["nominal_uncertainty"] = report.nominal_uncertainty;
  Json families = Json::array();
  for (const auto& [name, tau] : report.family_tau) {
    Json e;
    e["family"] = name;
    e["tau"] = tau;
    families.push_back(std::move(e));
  }
  j["family_tau"] = std::move(families);
  j["excluded"] = report.excluded;
  Json points = Json::array();
  for (const ComparePoint& p : report.points) {
    Json e;
    e["family"] = p.family;
    e["parameter"] = p.parameter;
    e["length"] = p.length;
    e["field"] = p.field;
    e["chi"] = p.chi;
    e["valid"] = p.valid;
    e["tau"] = p.tau;
    e["tau_spread"] = p.tau_spread;
    e["worst_delta_e"] = p.worst_delta_e;
    e["worst_delta_m"] = p.worst_delta_m;
    Json runs = Json::array();
    for (const PairedRun& r : p.runs) {
      Json q;
      q["seed"] = r.seed;
      q["valid"] = r.valid;
      q["delta_e_rel"] = r.delta_e_rel;
      q["delta_m_rel"] = r.delta_m_rel;
      q["f"] = r.sp.f;
      q["tau"] = r.sp.tau;
      q["det"] = method_result_json(r.det);
      q["rnd"] = method_result_json(r.rnd);
      runs.push_back(std::move(q));
    }
    e["runs"] = std::move(runs);
    points.push_back(std::move(e));
  }
  j["points"] = std::move(points);
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failed: " + path);
  return buf.str();
}

}  // namespace rlftn
