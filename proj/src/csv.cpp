#include "mcarma/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcarma/errors.hpp"

namespace mcarma {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_number(const std::string& field, long row, std::size_t column) {
  const std::string t = trim(field);
  char* end = nullptr;
  const double value = t.empty() ? 0.0 : std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ParseError("csv row " + std::to_string(row) + ", column " +
                     std::to_string(column) + ": cannot parse '" + field +
                     "' as a number");
  return value;
}

} // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_path_csv(const SamplePath& path, std::ostream& os) {
  if (path.n() < 1 || path.m() < 1)
    throw InvalidInputError("write_path_csv: path has no observations");
  os << 'k';
  for (int j = 0; j < path.m(); ++j) os << ",y" << j + 1;
  os << '\n';
  for (int k = 0; k < path.n(); ++k) {
    os << k + 1;
    for (int j = 0; j < path.m(); ++j)
      os << ',' << format_double(path.observations(k, j));
    os << '\n';
  }
}

void write_path_csv(const SamplePath& path, const std::string& filename) {
  std::ofstream os(filename);
  if (!os)
    throw InvalidInputError("cannot open '" + filename + "' for writing");
  write_path_csv(path, os);
  os.flush();
  if (!os) throw InvalidInputError("failed to write '" + filename + "'");
}

SamplePath read_path_csv(std::istream& is, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidInputError("read_path_csv: delta must be positive");

  std::string line;
  bool have_header = false;
  int m = 0;
  long row = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (!have_header) {
      if (trim(fields[0]) != "k" || fields.size() < 2)
        throw ParseError("csv header must be 'k,y1,...,ym'");
      m = static_cast<int>(fields.size()) - 1;
      have_header = true;
      continue;
    }
    ++row;
    if (static_cast<int>(fields.size()) != m + 1)
      throw ParseError("csv row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " columns, expected " +
                       std::to_string(m + 1));
    parse_number(fields[0], row, 1);
    std::vector<double> values(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
      values[static_cast<std::size_t>(j)] =
          parse_number(fields[static_cast<std::size_t>(j) + 1], row,
                       static_cast<std::size_t>(j) + 2);
    rows.push_back(std::move(values));
  }
  if (!have_header) throw ParseError("csv header must be 'k,y1,...,ym'");
  if (rows.empty()) throw ParseError("csv contains no data rows");

  SamplePath path;
  path.delta = delta;
  path.observations.resize(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (int j = 0; j < m; ++j)
      path.observations(static_cast<Eigen::Index>(k), j) =
          rows[k][static_cast<std::size_t>(j)];
  return path;
}

SamplePath read_path_csv(const std::string& filename, double delta) {
  std::ifstream is(filename);
  if (!is)
    throw InvalidInputError("cannot open '" + filename + "' for reading");
  return read_path_csv(is, delta);
}

void write_matrix_csv(const Eigen::MatrixXd& M, std::ostream& os) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j > 0) os << ',';
      os << format_double(M(i, j));
    }
    os << '\n';
  }
}

} // namespace mcarma
