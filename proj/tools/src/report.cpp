#include "report.hpp"

#include "kkmass/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace kkmass::cli {

namespace detail {

nlohmann::json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json numbers(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

std::string format(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

TextTable::TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

void TextTable::add(std::vector<std::string> row) {
  row.resize(header_.size());
  rows_.push_back(std::move(row));
}

std::string TextTable::render(const std::string& indent) const {
  std::vector<std::size_t> width(header_.size());
  for (std::size_t c = 0; c < header_.size(); ++c) {
    width[c] = header_[c].size();
    for (const auto& row : rows_) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    out << indent;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << "  ";
      out << std::string(width[c] - cells[c].size(), ' ') << cells[c];
    }
    out << '\n';
  };
  line(header_);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& row : rows_) line(row);
  return out.str();
}

}  // namespace detail

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

nlohmann::json to_json(const Report& report) {
  return {{"schema_version", kSchemaVersion}, {"body", report.body}, {"execution", report.execution}};
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  out << report.text;
  out << "\nchecks\n";
  detail::TextTable table({"result", "check", "value", "reference", "tolerance", "detail"});
  for (const Check& c : report.checks) {
    table.add({c.passed ? "PASS" : "FAIL", c.name, detail::format(c.value), detail::format(c.reference),
               detail::format(c.tolerance, 3), c.detail});
  }
  out << table.render();
  out << "\nstatus: " << (report.passed() ? "pass" : "fail") << '\n';
  if (report.execution.contains("wall_seconds")) {
    out << "wall clock: " << detail::format(report.execution["wall_seconds"].get<double>(), 4) << " s on "
        << report.execution["threads"].get<int>() << " thread(s)\n";
  }
  return out.str();
}

}  // namespace kkmass::cli
