#pragma once

#include <cstdint>
#include <string>

#include "rlftn/models.hpp"
#include "rlftn/mps.hpp"
#include "rlftn/types.hpp"

namespace rlftn {

/// One run's full configuration.  Parsed from the key = value text format
/// (see docs/config-format.md); every field has the documented default and
/// emit_config() writes the canonical form that parses back identically.
struct RunConfig {
  std::string model = "chain";  // "chain" or "cylinder"
  double spin = 0.5;            // chain only
  Index width = 2;              // cylinder only
  Index length = 0;             // required
  double field = 0.0;           // required
  Index chi = 0;                // required

  std::string method = "tsvd";  // "tsvd" or "rsvd"
  Index oversample = 0;         // 0 = twice the per-sector rank
  int power = 4;
  Index rsvd_min_dim = 32;

  double dt_start = 0.4;
  double dt_decay = 0.7;
  double dt_min = 1e-5;
  double energy_tol = 1e-8;
  Index check_interval = 10;
  Index max_sweeps = 1000000;
  std::string gate_form = "block";  // "block" or "product"
  double schmidt_tol = 1e-14;
  Index sector_slack = -1;  // -1 = default rule

  std::string scalar = "complex";  // "complex" or "real"
  std::uint64_t seed = 1;
  std::string out = "runs";
  bool collect_audit = true;
  bool spectrum_dump = false;

  /// The configured model; validated by the model constructors.
  Model make_model() const;
  /// The configured evolution parameters (chi, method, seed included).
  TebdParams make_params() const;
};

/// Parses and validates a config file.  Unknown keys, unparsable values,
/// out-of-range values, and missing required keys throw std::runtime_error
/// with file and line context.
RunConfig parse_config(const std::string& path);

/// Same parser on in-memory text; `origin` names the source in errors.
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical text form; parse_config_text(emit_config(c)) reproduces c
/// exactly (doubles are written with 17 significant digits).
std::string emit_config(const RunConfig& config);

}  // namespace rlftn
