#include "rlftn/matrix_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rlftn {

static_assert(std::endian::native == std::endian::little,
              "the binary matrix container is written for little-endian hosts");

namespace {

constexpr char kMagic[8] = {'R', 'L', 'F', 'M', 'A', 'T', '0', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

template <class Scalar>
void save_binary_impl(const std::string& path, const Matrix<Scalar>& a, std::uint8_t tag) {
  std::ofstream out = open_out(path, std::ios::binary);
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&tag), 1);
  write_u64(out, static_cast<std::uint64_t>(a.rows()));
  write_u64(out, static_cast<std::uint64_t>(a.cols()));
  // Stored row-major; Eigen matrices are column-major, so write row by row.
  std::vector<Scalar> row(static_cast<std::size_t>(a.cols()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) row[static_cast<std::size_t>(j)] = a(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(Scalar)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string fmt_token(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_token(const Complex& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
  return buf;
}

template <class Scalar>
void save_csv_impl(const std::string& path, const Matrix<Scalar>& a) {
  std::ofstream out = open_out(path, std::ios::out);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << fmt_token(a(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

[[noreturn]] void bad_token(const std::string& path, std::size_t line, const std::string& tok) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": bad matrix entry '" + tok +
                           "'");
}

// Accepts "a", "a+bi", "a-bi", and pure-imaginary "bi".
Complex parse_token(const std::string& tok, const std::string& path, std::size_t line,
                    bool& saw_imag) {
  if (tok.empty()) bad_token(path, line, tok);
  const char* s = tok.c_str();
  char* end = nullptr;
  const double first = std::strtod(s, &end);
  if (end == s) bad_token(path, line, tok);
  if (*end == '\0') return Complex(first, 0.0);
  if (*end == 'i' && *(end + 1) == '\0') {
    saw_imag = true;
    return Complex(0.0, first);
  }
  char* end2 = nullptr;
  const double second = std::strtod(end, &end2);
  if (end2 == end || *end2 != 'i' || *(end2 + 1) != '\0') bad_token(path, line, tok);
  saw_imag = true;
  return Complex(first, second);
}

}  // namespace

void save_matrix_binary(const std::string& path, const MatrixR& a) {
  save_binary_impl(path, a, 0);
}

void save_matrix_binary(const std::string& path, const MatrixC& a) {
  save_binary_impl(path, a, 1);
}

void save_matrix_csv(const std::string& path, const MatrixR& a) { save_csv_impl(path, a); }

void save_matrix_csv(const std::string& path, const MatrixC& a) { save_csv_impl(path, a); }

AnyMatrix load_matrix_binary(const std::string& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error(path + ": not a matrix container (bad magic)");
  std::uint8_t tag = 0;
  in.read(reinterpret_cast<char*>(&tag), 1);
  const std::uint64_t rows = read_u64(in);
  const std::uint64_t cols = read_u64(in);
  if (!in || tag > 1) throw std::runtime_error(path + ": corrupt matrix header");
  constexpr std::uint64_t kMaxDim = 1ull << 24;
  constexpr std::uint64_t kMaxElems = 1ull << 28;
  if (rows == 0 || cols == 0 || rows > kMaxDim || cols > kMaxDim ||
      rows > kMaxElems / cols)
    throw std::runtime_error(path + ": unreasonable matrix dimensions");
  const Index m = static_cast<Index>(rows), n = static_cast<Index>(cols);
  if (tag == 0) {
    MatrixR a(m, n);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Index i = 0; i < m; ++i) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
      if (!in) throw std::runtime_error(path + ": truncated matrix data");
      for (Index j = 0; j < n; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
    }
    return a;
  }
  MatrixC a(m, n);
  std::vector<Complex> row(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(Complex)));
    if (!in) throw std::runtime_error(path + ": truncated matrix data");
    for (Index j = 0; j < n; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
  }
  return a;
}

AnyMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::vector<std::vector<Complex>> data;
  bool saw_imag = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Tolerate a trailing carriage return and skip blank lines.
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty()) continue;
    std::vector<Complex> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const std::size_t b = tok.find_first_not_of(" \t");
      const std::size_t e = tok.find_last_not_of(" \t");
      if (b == std::string::npos) bad_token(path, lineno, tok);
      row.push_back(parse_token(tok.substr(b, e - b + 1), path, lineno, saw_imag));
    }
    if (row.empty()) bad_token(path, lineno, line);
    if (!data.empty() && row.size() != data.front().size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": inconsistent column count");
    data.push_back(std::move(row));
  }
  if (data.empty()) throw std::runtime_error(path + ": empty matrix file");
  const Index m = static_cast<Index>(data.size());
  const Index n = static_cast<Index>(data.front().size());
  if (saw_imag) {
    MatrixC a(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j)
        a(i, j) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return a;
  }
  MatrixR a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      a(i, j) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].real();
  return a;
}

AnyMatrix load_matrix(const std::string& path) {
  std::ifstream probe = open_in(path, std::ios::binary);
  char magic[8] = {};
  probe.read(magic, sizeof magic);
  const bool binary = probe.gcount() == 8 && std::memcmp(magic, kMagic, sizeof kMagic) == 0;
  probe.close();
  return binary ? load_matrix_binary(path) : load_matrix_csv(path);
}

}  // namespace rlftn
