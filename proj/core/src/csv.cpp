// SPDX-License-Identifier: Apache-2.0

#include "fonspn/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fonspn {

namespace {

constexpr const char* kTraceHeader =
    "update_index,nmsd_db_mean,nmsd_db_p10,nmsd_db_p90,diverged_count";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_meta(std::ostream& out, const MetaRows& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << " = " << value << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_trace_csv(const std::string& path, const AggregateTrace& trace,
                     const MetaRows& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "# trials = " << trace.trials << "\n";
  out << kTraceHeader << "\n";
  for (std::size_t k = 0; k < trace.mean_db.size(); ++k)
    out << k << ',' << fmt(trace.mean_db[k]) << ',' << fmt(trace.p10_db[k])
        << ',' << fmt(trace.p90_db[k]) << ',' << trace.diverged_trials << "\n";
  if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

AggregateTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot read '" + path + "'");
  AggregateTrace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') {
      const auto pos = line.find("trials = ");
      if (pos != std::string::npos) trace.trials = std::stoi(line.substr(pos + 9));
      continue;
    }
    if (!header_seen) {
      if (line != kTraceHeader)
        throw std::runtime_error("csv: unexpected header in '" + path + "'");
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');  // update_index, implicit by row order
    std::getline(ss, field, ',');
    trace.mean_db.push_back(std::stod(field));
    std::getline(ss, field, ',');
    trace.p10_db.push_back(std::stod(field));
    std::getline(ss, field, ',');
    trace.p90_db.push_back(std::stod(field));
    std::getline(ss, field, ',');
    trace.diverged_trials = std::stoi(field);
  }
  if (!header_seen) throw std::runtime_error("csv: no header in '" + path + "'");
  return trace;
}

void write_rows_csv(const std::string& path,
                    const std::vector<std::pair<std::string, double>>& rows,
                    const MetaRows& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << format_rows_csv(rows);
  if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

std::string format_rows_csv(
    const std::vector<std::pair<std::string, double>>& rows) {
  std::string text = "quantity,value\n";
  for (const auto& [name, value] : rows) text += name + ',' + fmt(value) + '\n';
  return text;
}

}  // namespace fonspn
