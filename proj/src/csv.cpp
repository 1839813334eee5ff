#include "tvcpd/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tvcpd {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

TimeSeries read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path, 1, "empty file");
  std::vector<std::string> names;
  for (const auto& f : split_fields(line)) {
    auto name = trim(f);
    if (name.empty()) throw ParseError(path, 1, "empty feature name");
    names.push_back(name);
  }
  const int d = static_cast<int>(names.size());

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) != d)
      throw ParseError(path, line_no,
                       "expected " + std::to_string(d) + " fields, got " +
                           std::to_string(fields.size()));
    std::vector<double> row(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      const std::string f = trim(fields[static_cast<std::size_t>(i)]);
      if (f.empty()) throw ParseError(path, line_no, "missing value");
      std::size_t pos = 0;
      try {
        row[static_cast<std::size_t>(i)] = std::stod(f, &pos);
      } catch (const std::exception&) {
        throw ParseError(path, line_no, "not a number: '" + f + "'");
      }
      if (pos != f.size())
        throw ParseError(path, line_no, "trailing characters in '" + f + "'");
    }
    rows.push_back(std::move(row));
  }

  const int T = static_cast<int>(rows.size());
  if (T < 2) throw ParseError(path, line_no, "need at least two data rows");
  Eigen::MatrixXd values(d, T);
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < d; ++i)
      values(i, t) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];

  return TimeSeries::create(std::move(values), std::move(names));
}

void write_csv(const TimeSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot open file for writing");
  for (int i = 0; i < series.d(); ++i) {
    if (i > 0) out << ',';
    out << series.feature_names[static_cast<std::size_t>(i)];
  }
  out << '\n';
  char buf[64];
  for (int t = 0; t < series.length(); ++t) {
    for (int i = 0; i < series.d(); ++i) {
      if (i > 0) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", series.values(i, t));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace tvcpd
