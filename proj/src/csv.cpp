#include "sisreg/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace sisreg {

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

double parse_cell(const std::string& s, const std::string& path, int row) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(ErrorCode::IoError,
         path + ": unparsable cell '" + s + "' at data row " +
             std::to_string(row));
  }
  if (pos != s.size())
    fail(ErrorCode::IoError,
         path + ": trailing characters in cell '" + s + "'");
  if (!std::isfinite(v))
    fail(ErrorCode::IoError, path + ": non-finite cell at data row " +
                                 std::to_string(row));
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == x) return shorter;
  }
  return buf;
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::IoError, path + ": empty file");
  const auto header = split_csv_line(line);
  int y_col = -1;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "y") {
      if (y_col >= 0)
        fail(ErrorCode::IoError, path + ": duplicate 'y' column");
      y_col = static_cast<int>(j);
    } else {
      names.push_back(header[j]);
    }
  }
  if (y_col < 0) fail(ErrorCode::IoError, path + ": no column named 'y'");

  std::vector<double> ys;
  std::vector<std::vector<double>> rows;
  int row_idx = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      fail(ErrorCode::IoError, path + ": row " + std::to_string(row_idx) +
                                   " has " + std::to_string(cells.size()) +
                                   " cells, expected " +
                                   std::to_string(header.size()));
    std::vector<double> xrow;
    xrow.reserve(header.size() - 1);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const double v = parse_cell(cells[j], path, row_idx);
      if (static_cast<int>(j) == y_col)
        ys.push_back(v);
      else
        xrow.push_back(v);
    }
    rows.push_back(std::move(xrow));
    ++row_idx;
  }
  if (rows.empty() || rows[0].empty())
    fail(ErrorCode::IoError, path + ": no data");
  MatrixXd X(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows[0].size()));
  VectorXd y(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = ys[i];
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  }
  return Dataset(std::move(y), std::move(X), std::move(names));
}

void save_dataset_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out << "y";
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    if (!d.feature_names.empty())
      out << ',' << d.feature_names[static_cast<std::size_t>(j)];
    else
      out << ",x" << (j + 1);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    out << format_double(d.y[i]);
    for (Eigen::Index j = 0; j < d.p(); ++j)
      out << ',' << format_double(d.X(i, j));
    out << '\n';
  }
}

void save_truth_csv(const GroundTruth& gt, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out << "index,beta_true\n";
  for (Eigen::Index j = 0; j < gt.beta_true.size(); ++j)
    out << j << ',' << format_double(gt.beta_true[j]) << '\n';
}

GroundTruth load_truth_csv(const std::string& path, double sigma) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).size() != 2)
    fail(ErrorCode::IoError, path + ": bad truth header");
  std::vector<double> vals;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2)
      fail(ErrorCode::IoError, path + ": bad truth row");
    vals.push_back(parse_cell(cells[1], path, row++));
  }
  VectorXd beta(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t j = 0; j < vals.size(); ++j)
    beta[static_cast<Eigen::Index>(j)] = vals[j];
  return GroundTruth::from_beta(std::move(beta), sigma);
}

}  // namespace sisreg
