#include "rlftn/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rlftn {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& origin, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    fail(origin, line, "expected a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, const std::string& origin, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    fail(origin, line, "expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& v, const std::string& origin, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || v.front() == '-' || errno == ERANGE)
    fail(origin, line, "expected an unsigned integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, const std::string& origin, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(origin, line, "expected a boolean (true/false), got '" + v + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Model RunConfig::make_model() const {
  if (model == "chain") {
    ChainModel m;
    m.length = length;
    m.spin = spin;
    m.field = field;
    return m;
  }
  CylinderModel m;
  m.length = length;
  m.width = width;
  m.field = field;
  return m;
}

TebdParams RunConfig::make_params() const {
  TebdParams p;
  p.chi = chi;
  p.dt_start = dt_start;
  p.dt_decay = dt_decay;
  p.dt_min = dt_min;
  p.energy_tol = energy_tol;
  p.check_interval = check_interval;
  p.max_sweeps = max_sweeps;
  p.gate_form = gate_form == "product" ? GateForm::product : GateForm::block;
  p.schmidt_tol = schmidt_tol;
  p.method = method == "rsvd" ? BlockMethod::Kind::rsvd : BlockMethod::Kind::tsvd;
  p.rsvd_power = power;
  p.rsvd_oversample = oversample;
  p.rsvd_min_dim = rsvd_min_dim;
  p.sector_slack = sector_slack;
  p.seed = seed;
  p.collect_audit = collect_audit;
  return p;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    if (val.empty()) fail(origin, lineno, "empty value for key '" + key + "'");
    if (!seen.insert(key).second) fail(origin, lineno, "duplicate key '" + key + "'");

    if (key == "model") {
      if (val != "chain" && val != "cylinder")
        fail(origin, lineno, "model must be chain or cylinder");
      c.model = val;
    } else if (key == "spin") {
      c.spin = parse_double(val, origin, lineno);
      const double twice = 2.0 * c.spin;
      if (!(c.spin > 0.0) || std::abs(twice - std::llround(twice)) > 1e-12)
        fail(origin, lineno, "spin must be a positive half-integer");
    } else if (key == "width") {
      c.width = parse_int(val, origin, lineno);
      if (c.width < 2 || c.width > 12) fail(origin, lineno, "width must be in [2, 12]");
    } else if (key == "length") {
      c.length = parse_int(val, origin, lineno);
      if (c.length < 2) fail(origin, lineno, "length must be >= 2");
    } else if (key == "field") {
      c.field = parse_double(val, origin, lineno);
    } else if (key == "chi") {
      c.chi = parse_int(val, origin, lineno);
      if (c.chi < 1) fail(origin, lineno, "chi must be >= 1");
    } else if (key == "method") {
      if (val != "tsvd" && val != "rsvd") fail(origin, lineno, "method must be tsvd or rsvd");
      c.method = val;
    } else if (key == "oversample") {
      c.oversample = parse_int(val, origin, lineno);
      if (c.oversample < 0) fail(origin, lineno, "oversample must be >= 0");
    } else if (key == "power") {
      c.power = static_cast<int>(parse_int(val, origin, lineno));
      if (c.power < 0 || c.power > 64) fail(origin, lineno, "power must be in [0, 64]");
    } else if (key == "rsvd_min_dim") {
      c.rsvd_min_dim = parse_int(val, origin, lineno);
      if (c.rsvd_min_dim < 1) fail(origin, lineno, "rsvd_min_dim must be >= 1");
    } else if (key == "dt_start") {
      c.dt_start = parse_double(val, origin, lineno);
      if (!(c.dt_start > 0.0)) fail(origin, lineno, "dt_start must be > 0");
    } else if (key == "dt_decay") {
      c.dt_decay = parse_double(val, origin, lineno);
      if (!(c.dt_decay > 0.0 && c.dt_decay < 1.0))
        fail(origin, lineno, "dt_decay must be in (0, 1)");
    } else if (key == "dt_min") {
      c.dt_min = parse_double(val, origin, lineno);
      if (!(c.dt_min > 0.0)) fail(origin, lineno, "dt_min must be > 0");
    } else if (key == "energy_tol") {
      c.energy_tol = parse_double(val, origin, lineno);
      if (!(c.energy_tol > 0.0)) fail(origin, lineno, "energy_tol must be > 0");
    } else if (key == "check_interval") {
      c.check_interval = parse_int(val, origin, lineno);
      if (c.check_interval < 1) fail(origin, lineno, "check_interval must be >= 1");
    } else if (key == "max_sweeps") {
      c.max_sweeps = parse_int(val, origin, lineno);
      if (c.max_sweeps < 1) fail(origin, lineno, "max_sweeps must be >= 1");
    } else if (key == "gate_form") {
      if (val != "block" && val != "product")
        fail(origin, lineno, "gate_form must be block or product");
      c.gate_form = val;
    } else if (key == "schmidt_tol") {
      c.schmidt_tol = parse_double(val, origin, lineno);
      if (!(c.schmidt_tol > 0.0 && c.schmidt_tol < 1.0))
        fail(origin, lineno, "schmidt_tol must be in (0, 1)");
    } else if (key == "sector_slack") {
      c.sector_slack = parse_int(val, origin, lineno);
      if (c.sector_slack < -1) fail(origin, lineno, "sector_slack must be >= -1");
    } else if (key == "scalar") {
      if (val != "real" && val != "complex")
        fail(origin, lineno, "scalar must be real or complex");
      c.scalar = val;
    } else if (key == "seed") {
      c.seed = parse_u64(val, origin, lineno);
    } else if (key == "out") {
      c.out = val;
    } else if (key == "collect_audit") {
      c.collect_audit = parse_bool(val, origin, lineno);
    } else if (key == "spectrum_dump") {
      c.spectrum_dump = parse_bool(val, origin, lineno);
    } else {
      fail(origin, lineno, "unknown key '" + key + "'");
    }
  }

  if (!seen.count("length")) throw std::runtime_error(origin + ": missing required key 'length'");
  if (!seen.count("field")) throw std::runtime_error(origin + ": missing required key 'field'");
  if (!seen.count("chi")) throw std::runtime_error(origin + ": missing required key 'chi'");
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "model = " << c.model << '\n';
  if (c.model == "chain") out << "spin = " << fmt(c.spin) << '\n';
  if (c.model == "cylinder") out << "width = " << c.width << '\n';
  out << "length = " << c.length << '\n';
  out << "field = " << fmt(c.field) << '\n';
  out << "chi = " << c.chi << '\n';
  out << "method = " << c.method << '\n';
  out << "oversample = " << c.oversample << '\n';
  out << "power = " << c.power << '\n';
  out << "rsvd_min_dim = " << c.rsvd_min_dim << '\n';
  out << "dt_start = " << fmt(c.dt_start) << '\n';
  out << "dt_decay = " << fmt(c.dt_decay) << '\n';
  out << "dt_min = " << fmt(c.dt_min) << '\n';
  out << "energy_tol = " << fmt(c.energy_tol) << '\n';
  out << "check_interval = " << c.check_interval << '\n';
  out << "max_sweeps = " << c.max_sweeps << '\n';
  out << "gate_form = " << c.gate_form << '\n';
  out << "schmidt_tol = " << fmt(c.schmidt_tol) << '\n';
  out << "sector_slack = " << c.sector_slack << '\n';
  out << "scalar = " << c.scalar << '\n';
  out << "seed = " << c.seed << '\n';
  out << "out = " << c.out << '\n';
  out << "collect_audit = " << (c.collect_audit ? "true" : "false") << '\n';
  out << "spectrum_dump = " << (c.spectrum_dump ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace rlftn
