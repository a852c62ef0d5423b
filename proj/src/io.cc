#include "dequant/io.hh"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dequant/sketching.hh"

namespace dequant {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("cannot parse number: '" + s + "'");
  return x;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Complex parse_complex(const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) throw std::invalid_argument("empty complex token");
  if (t.back() != 'j' && t.back() != 'i') return parse_double(t);
  const std::string body = t.substr(0, t.size() - 1);
  // Split at the last sign that is not the leading sign or an exponent sign.
  for (std::size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
      return {parse_double(body.substr(0, k)), parse_double(body.substr(k))};
  }
  return {0.0, parse_double(body)};
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string im = format_double(z.imag());
  if (im[0] != '-') im = "+" + im;
  return format_double(z.real()) + im + "j";
}

Mat read_dense_csv(std::istream& in) {
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    std::vector<Complex> row;
    for (const auto& cell : split_commas(line)) row.push_back(parse_complex(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("read_dense_csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Mat(0, 0);
  Mat a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return a;
}

Mat read_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dense_csv(in);
}

void write_dense_csv(std::ostream& out, const Mat& a) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out << (j ? "," : "") << format_complex(a(i, j));
    out << '\n';
  }
}

void write_dense_csv(const std::string& path, const Mat& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_dense_csv(out, a);
}

Mat read_sparse_triplets(std::istream& in, Index rows, Index cols) {
  struct Triplet { Index i, j; Complex v; };
  std::vector<Triplet> entries;
  Index max_i = -1, max_j = -1;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    Index i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(ss >> i >> j >> re)) throw std::invalid_argument("read_sparse_triplets: bad line '" + line + "'");
    ss >> im;
    if (i < 0 || j < 0) throw std::invalid_argument("read_sparse_triplets: negative index");
    entries.push_back({i, j, {re, im}});
    max_i = std::max(max_i, i);
    max_j = std::max(max_j, j);
  }
  if (rows < 0) rows = max_i + 1;
  if (cols < 0) cols = max_j + 1;
  if (max_i >= rows || max_j >= cols) throw std::out_of_range("read_sparse_triplets: index beyond dimensions");
  Mat a = Mat::Zero(rows, cols);
  for (const auto& t : entries) a(t.i, t.j) += t.v;
  return a;
}

void write_sparse_triplets(std::ostream& out, const Mat& a) {
  out << "# " << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != Complex(0.0))
        out << i << ' ' << j << ' ' << format_double(a(i, j).real()) << ' ' << format_double(a(i, j).imag()) << '\n';
}

void write_distribution_csv(std::ostream& out, const Distribution& p) {
  out << "index,probability\n";
  for (std::size_t i = 0; i < p.size(); ++i) out << i << ',' << format_double(p[i]) << '\n';
}

Distribution read_distribution_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "index,probability")
    throw std::invalid_argument("read_distribution_csv: missing header");
  Distribution p;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != 2) throw std::invalid_argument("read_distribution_csv: expected two columns");
    const auto idx = static_cast<std::size_t>(std::stoll(cells[0]));
    if (idx >= p.size()) p.resize(idx + 1, 0.0);
    p[idx] = parse_double(cells[1]);
  }
  return p;
}

void write_sketch_csv(std::ostream& out, const SketchDescription& s) {
  out << "i,s_i,alpha_i\n";
  for (Index k = 0; k < s.size(); ++k)
    out << k << ',' << s.indices[static_cast<std::size_t>(k)] << ','
        << format_double(s.scales[static_cast<std::size_t>(k)]) << '\n';
}

SketchDescription read_sketch_csv(std::istream& in, Index source_dim) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "i,s_i,alpha_i")
    throw std::invalid_argument("read_sketch_csv: missing header");
  SketchDescription s;
  s.source_dim = source_dim;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != 3) throw std::invalid_argument("read_sketch_csv: expected three columns");
    const Index row = std::stoll(cells[1]);
    if (row < 0 || row >= source_dim) throw std::out_of_range("read_sketch_csv: row index out of range");
    s.indices.push_back(row);
    s.scales.push_back(parse_double(cells[2]));
  }
  return s;
}

}  // namespace dequant
