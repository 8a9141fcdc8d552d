#include "spclass/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "spclass/errors.hpp"

namespace spclass {

std::vector<int> Dataset::train_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if (!test_mask[static_cast<size_t>(i)]) out.push_back(i);
  return out;
}

std::vector<int> Dataset::test_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if (test_mask[static_cast<size_t>(i)]) out.push_back(i);
  return out;
}

void Dataset::validate() const {
  const size_t nn = static_cast<size_t>(n());
  if (y.size() != nn || coords.size() != nn || test_mask.size() != nn)
    throw validation_error("dataset: field lengths disagree with design matrix rows");
  if (X.cols() < 1) throw validation_error("dataset: design matrix needs an intercept column");
  if (!X.allFinite()) throw validation_error("dataset: non-finite design entry");
  for (int i = 0; i < n(); ++i) {
    if (X(i, 0) != 1.0)
      throw validation_error("dataset: intercept column must be identically 1");
    const int yi = y[static_cast<size_t>(i)];
    if (yi != -1 && yi != 0 && yi != 1)
      throw validation_error("dataset: response must be 0, 1, or -1 (unrecorded)");
  }
  std::map<std::pair<int, int>, int> seen;
  for (int i = 0; i < n(); ++i) {
    const auto key = std::make_pair(coords[static_cast<size_t>(i)].row,
                                    coords[static_cast<size_t>(i)].col);
    if (!seen.emplace(key, i).second)
      throw validation_error("dataset: duplicate coordinates at row " +
                             std::to_string(key.first) + ", col " + std::to_string(key.second));
  }
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& X, const std::vector<int>& rows) {
  if (rows.empty()) throw validation_error("standardizer: no rows to fit on");
  const int p = static_cast<int>(X.cols());
  Standardizer s;
  s.mean = Eigen::VectorXd::Zero(p);
  s.scale = Eigen::VectorXd::Ones(p);
  for (int j = 1; j < p; ++j) {
    double m = 0.0;
    for (int r : rows) m += X(r, j);
    m /= static_cast<double>(rows.size());
    double ss = 0.0;
    for (int r : rows) ss += (X(r, j) - m) * (X(r, j) - m);
    const double denom = rows.size() > 1 ? static_cast<double>(rows.size() - 1) : 1.0;
    const double sd = std::sqrt(ss / denom);
    s.mean[j] = m;
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != mean.size())
    throw validation_error("standardizer: column count mismatch");
  Eigen::MatrixXd out = X;
  for (int j = 1; j < X.cols(); ++j)
    out.col(j) = (X.col(j).array() - mean[j]) / scale[j];
  return out;
}

Eigen::VectorXd Standardizer::apply_row(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size())
    throw validation_error("standardizer: length mismatch");
  Eigen::VectorXd out = x;
  for (int j = 1; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
  return out;
}

Standardizer standardize_covariates(Dataset& d) {
  Standardizer s = Standardizer::fit(d.X, d.train_indices());
  d.X = s.apply(d.X);
  return s;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& s, const std::string& what, int line_no) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw validation_error("csv line " + std::to_string(line_no) + ": bad " + what +
                           " value '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what, int line_no) {
  const double v = parse_number(s, what, line_no);
  const int iv = static_cast<int>(std::lround(v));
  if (static_cast<double>(iv) != v)
    throw validation_error("csv line " + std::to_string(line_no) + ": non-integer " + what +
                           " value '" + s + "'");
  return iv;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Trim to the shortest representation that round-trips.
  for (int prec = 1; prec <= 16; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    if (std::stod(probe) == v) return probe;
  }
  return buf;
}

}  // namespace

Dataset read_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw validation_error("empty data file: " + path);
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "row" || header[1] != "col" || header[2] != "y" ||
      header.back() != "is_test") {
    std::string need = "row,col,y";
    throw validation_error("data file " + path +
                           ": header must be row,col,y,x1..xK,is_test; missing or misnamed "
                           "columns (got '" + line + "')");
  }
  const int k = static_cast<int>(header.size()) - 4;  // covariate count
  for (int j = 0; j < k; ++j) {
    const std::string expect = "x" + std::to_string(j + 1);
    if (header[static_cast<size_t>(3 + j)] != expect)
      throw validation_error("data file " + path + ": covariate column " +
                             std::to_string(j + 4) + " must be named " + expect);
  }

  std::vector<GridCoord> coords;
  std::vector<int> ys;
  std::vector<char> mask;
  std::vector<double> xs;  // row-major covariates
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size())
      throw validation_error("csv line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(f.size()));
    GridCoord c{parse_int(f[0], "row", line_no), parse_int(f[1], "col", line_no)};
    coords.push_back(c);
    if (f[2].empty()) {
      ys.push_back(-1);
    } else {
      const int yv = parse_int(f[2], "y", line_no);
      if (yv != 0 && yv != 1)
        throw validation_error("csv line " + std::to_string(line_no) +
                               ": y must be 0, 1, or empty");
      ys.push_back(yv);
    }
    for (int j = 0; j < k; ++j)
      xs.push_back(parse_number(f[static_cast<size_t>(3 + j)], header[static_cast<size_t>(3 + j)],
                                line_no));
    const int t = parse_int(f.back(), "is_test", line_no);
    if (t != 0 && t != 1)
      throw validation_error("csv line " + std::to_string(line_no) + ": is_test must be 0 or 1");
    mask.push_back(static_cast<char>(t));
  }

  const int n = static_cast<int>(coords.size());
  Dataset d;
  d.X = Eigen::MatrixXd::Ones(n, k + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) d.X(i, j + 1) = xs[static_cast<size_t>(i) * k + j];
  d.y = std::move(ys);
  d.coords = std::move(coords);
  d.test_mask = std::move(mask);
  d.validate();
  return d;
}

void write_data_csv(const std::string& path, const Dataset& d) {
  d.validate();
  std::ofstream out(path);
  if (!out) throw numeric_error("cannot write data file: " + path);
  const int k = d.ell() - 1;
  out << "row,col,y";
  for (int j = 1; j <= k; ++j) out << ",x" << j;
  out << ",is_test\n";
  for (int i = 0; i < d.n(); ++i) {
    out << d.coords[static_cast<size_t>(i)].row << ',' << d.coords[static_cast<size_t>(i)].col
        << ',';
    if (d.y[static_cast<size_t>(i)] >= 0) out << d.y[static_cast<size_t>(i)];
    for (int j = 1; j <= k; ++j) out << ',' << format_number(d.X(i, j));
    out << ',' << static_cast<int>(d.test_mask[static_cast<size_t>(i)]) << '\n';
  }
  if (!out) throw numeric_error("write failed: " + path);
}

}  // namespace spclass
