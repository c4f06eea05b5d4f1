#pragma once

#include <string>
#include <variant>

#include "rlftn/types.hpp"

namespace rlftn {

/// A matrix loaded from disk; real or complex is decided by the file.
using AnyMatrix = std::variant<MatrixR, MatrixC>;

/// Binary container: 8-byte magic "RLFMAT01", u8 dtype tag (0 = f64,
/// 1 = complex f64), little-endian u64 rows and cols, then rows * cols
/// values row-major (complex as re, im f64 pairs).
void save_matrix_binary(const std::string& path, const MatrixR& a);
void save_matrix_binary(const std::string& path, const MatrixC& a);

/// Text container: one matrix row per line, comma-separated tokens.  Real
/// entries are plain numbers; complex entries use the "a+bi" token form
/// (also accepted: "a-bi", pure-imaginary "bi").  A complex matrix whose
/// imaginary part is exactly zero still saves complex tokens, so the loaded
/// type matches the saved one.
void save_matrix_csv(const std::string& path, const MatrixR& a);
void save_matrix_csv(const std::string& path, const MatrixC& a);

/// Loads either container, decided by the binary magic; CSV otherwise.
/// Throws std::runtime_error with file/line context on malformed input.
AnyMatrix load_matrix(const std::string& path);

AnyMatrix load_matrix_binary(const std::string& path);
AnyMatrix load_matrix_csv(const std::string& path);

}  // namespace rlftn
