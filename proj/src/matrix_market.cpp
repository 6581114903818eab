#include "kaczmarz/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

namespace {

struct Header {
  bool coordinate = false;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::size_t parse_size(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw ParseError(line, "expected a nonnegative integer, got '" + std::string(tok) + "'");
  }
  return v;
}

double parse_real(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw ParseError(line, "expected a real number, got '" + std::string(tok) + "'");
  }
  return v;
}

Header parse_header(const std::string& first) {
  const auto toks = split_ws(first);
  if (toks.size() != 5 || lower(std::string(toks[0])) != "%%matrixmarket") {
    throw ParseError(1, "missing '%%MatrixMarket' banner");
  }
  if (lower(std::string(toks[1])) != "matrix") throw UnsupportedFormat("object must be 'matrix'");
  const std::string fmt = lower(std::string(toks[2]));
  const std::string field = lower(std::string(toks[3]));
  const std::string sym = lower(std::string(toks[4]));
  Header h;
  if (fmt == "coordinate") {
    h.coordinate = true;
  } else if (fmt != "array") {
    throw ParseError(1, "format must be 'coordinate' or 'array'");
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw UnsupportedFormat("field '" + field + "' is not supported (real only)");
  }
  if (sym != "general") throw UnsupportedFormat("symmetry '" + sym + "' is not supported (general only)");
  return h;
}

// Reads the banner, skips comments, and returns the size line's tokens.
struct Reader {
  std::ifstream in;
  std::size_t line_no = 0;
  std::string line;

  explicit Reader(const std::filesystem::path& path) : in(path) {
    if (!in) throw IoError("cannot open '" + path.string() + "'");
  }

  bool next_data_line() {
    while (std::getline(in, line)) {
      ++line_no;
      const auto toks = split_ws(line);
      if (toks.empty() || line.front() == '%') continue;
      return true;
    }
    return false;
  }
};

struct Parsed {
  std::size_t m = 0, n = 0;
  bool coordinate = false;
  std::vector<double> dense;  // row-major
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
};

Parsed parse_file(const std::filesystem::path& path) {
  Reader r(path);
  if (!std::getline(r.in, r.line)) throw ParseError(1, "empty file");
  r.line_no = 1;
  const Header h = parse_header(r.line);
  if (!r.next_data_line()) throw ParseError(r.line_no + 1, "missing size line");
  const auto size_toks = split_ws(r.line);
  Parsed out;
  out.coordinate = h.coordinate;
  if (h.coordinate) {
    if (size_toks.size() != 3) throw ParseError(r.line_no, "coordinate size line needs 'rows cols entries'");
    out.m = parse_size(size_toks[0], r.line_no);
    out.n = parse_size(size_toks[1], r.line_no);
    const std::size_t nnz = parse_size(size_toks[2], r.line_no);
    std::vector<std::tuple<std::size_t, std::size_t, double, std::size_t>> trip;
    trip.reserve(nnz);
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!r.next_data_line()) throw ParseError(r.line_no + 1, "fewer entries than declared");
      const auto t = split_ws(r.line);
      if (t.size() != 3) throw ParseError(r.line_no, "coordinate entry needs 'row col value'");
      const std::size_t i = parse_size(t[0], r.line_no);
      const std::size_t j = parse_size(t[1], r.line_no);
      if (i < 1 || i > out.m || j < 1 || j > out.n) throw ParseError(r.line_no, "index out of range");
      trip.emplace_back(i - 1, j - 1, parse_real(t[2], r.line_no), r.line_no);
    }
    if (r.next_data_line()) throw ParseError(r.line_no, "more entries than declared");
    std::stable_sort(trip.begin(), trip.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    out.row_ptr.assign(out.m + 1, 0);
    out.cols.reserve(nnz);
    out.vals.reserve(nnz);
    for (std::size_t e = 0; e < trip.size(); ++e) {
      const auto& [i, j, v, ln] = trip[e];
      if (e > 0 && std::get<0>(trip[e - 1]) == i && std::get<1>(trip[e - 1]) == j) {
        throw ParseError(ln, "duplicate entry");
      }
      ++out.row_ptr[i + 1];
      out.cols.push_back(static_cast<std::uint32_t>(j));
      out.vals.push_back(v);
    }
    for (std::size_t i = 0; i < out.m; ++i) out.row_ptr[i + 1] += out.row_ptr[i];
  } else {
    if (size_toks.size() != 2) throw ParseError(r.line_no, "array size line needs 'rows cols'");
    out.m = parse_size(size_toks[0], r.line_no);
    out.n = parse_size(size_toks[1], r.line_no);
    out.dense.assign(out.m * out.n, 0.0);
    // Array files are column-major.
    for (std::size_t j = 0; j < out.n; ++j) {
      for (std::size_t i = 0; i < out.m; ++i) {
        if (!r.next_data_line()) throw ParseError(r.line_no + 1, "fewer entries than declared");
        const auto t = split_ws(r.line);
        if (t.size() != 1) throw ParseError(r.line_no, "array entry needs exactly one value");
        out.dense[i * out.n + j] = parse_real(t[0], r.line_no);
      }
    }
    if (r.next_data_line()) throw ParseError(r.line_no, "more entries than declared");
  }
  return out;
}

void put_real(std::ostream& os, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  os.write(buf, len);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

}  // namespace

RowMatrix read_matrix_market(const std::filesystem::path& path) {
  Parsed p = parse_file(path);
  if (p.coordinate) {
    return RowMatrix::sparse(p.m, p.n, std::move(p.row_ptr), std::move(p.cols), std::move(p.vals));
  }
  return RowMatrix::dense(p.m, p.n, std::move(p.dense));
}

Vector read_vector_market(const std::filesystem::path& path) {
  Parsed p = parse_file(path);
  if (p.n != 1) throw ShapeMismatch("vector file must have exactly one column");
  if (!p.coordinate) return std::move(p.dense);
  Vector v(p.m, 0.0);
  for (std::size_t i = 0; i < p.m; ++i) {
    if (p.row_ptr[i + 1] > p.row_ptr[i]) v[i] = p.vals[p.row_ptr[i]];
  }
  return v;
}

void write_matrix_market(const std::filesystem::path& path, const RowMatrix& a) {
  std::ofstream os = open_out(path);
  if (a.is_sparse()) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << a.rows() << ' ' << a.cols() << ' ' << a.stored() << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const RowView r = a.row(i);
      for (std::size_t p = 0; p < r.size(); ++p) {
        os << (i + 1) << ' ' << (r.cols[p] + 1) << ' ';
        put_real(os, r.vals[p]);
        os << '\n';
      }
    }
  } else {
    os << "%%MatrixMarket matrix array real general\n";
    os << a.rows() << ' ' << a.cols() << '\n';
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (std::size_t i = 0; i < a.rows(); ++i) {
        put_real(os, a.row(i).vals[j]);
        os << '\n';
      }
    }
  }
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

void write_vector_market(const std::filesystem::path& path, std::span<const double> v) {
  std::ofstream os = open_out(path);
  os << "%%MatrixMarket matrix array real general\n";
  os << v.size() << " 1\n";
  for (double x : v) {
    put_real(os, x);
    os << '\n';
  }
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace kaczmarz
