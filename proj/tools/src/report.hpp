#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace kkmass::cli::detail {

/// Finite doubles as numbers, non-finite ones as "inf", "-inf" or "nan".
nlohmann::json number(double v);
nlohmann::json numbers(const std::vector<double>& v);

/// %.*g with a fixed precision; non-finite values spelled out.
std::string format(double v, int precision = 10);

/// Column-aligned text table.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::string render(const std::string& indent = "  ") const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace kkmass::cli::detail
