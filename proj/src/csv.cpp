#include "tsrobust/csv.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsrobust/errors.hpp"

namespace tsr {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  write_text_file(path, matrix_to_csv(m));
}

std::string series_to_csv(const Matrix& x) {
  std::string out = "t";
  for (Eigen::Index j = 0; j < x.cols(); ++j) out += ",x" + std::to_string(j + 1);
  out += '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out += std::to_string(i);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out += ',';
      out += format_double(x(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_series_csv(const std::string& path, const Matrix& x) {
  write_text_file(path, series_to_csv(x));
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(',', pos);
    if (next == std::string::npos) next = line.size();
    const std::string tok = line.substr(pos, next - pos);
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
      if (used != tok.size()) return false;
      out.push_back(v);
    } catch (const std::exception&) {
      return false;
    }
    pos = next + 1;
    if (next == line.size()) break;
  }
  return !out.empty();
}

}  // namespace

Matrix read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_seen = false;
  bool drop_time_column = false;
  std::vector<double> parsed;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (parse_row(line, parsed)) {
      rows.push_back(parsed);
    } else if (!header_seen && rows.empty()) {
      header_seen = true;
      drop_time_column = line.size() >= 1 && (line[0] == 't' || line[0] == 'T') &&
                         (line.size() == 1 || line[1] == ',');
    } else {
      throw InvalidInput("unparseable CSV row in " + path + ": " + line);
    }
  }
  if (rows.empty()) throw InvalidInput("no numeric rows in " + path);
  const std::size_t skip = drop_time_column ? 1 : 0;
  const std::size_t cols = rows.front().size() - skip;
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols + skip) {
      throw InvalidInput("ragged CSV rows in " + path);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j + skip];
    }
  }
  return m;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tsr
