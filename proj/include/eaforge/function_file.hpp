#pragma once

// Line-oriented function files. '#' starts a comment. Records:
//   T <n> <m> <h_0> ... <h_{2^n-1}>          truth table, hex outputs
//   U <n> <mod-hex> <coef>:<exp>[,...]       univariate over GF(2^n), m = n

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eaforge/vbf.hpp"

namespace eaforge {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& reason);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct FunctionRecord {
  Vbf f;
  std::size_t line;
};

std::vector<FunctionRecord> parse_function_records(std::istream& in);
std::vector<Vbf> parse_function_text(std::string_view text);
// Throws ParseError with line 0 when the file cannot be opened.
std::vector<Vbf> parse_function_file(const std::string& path);

// Single-line T record, lowercase hex without prefix.
std::string format_truth_table(const Vbf& f);

}  // namespace eaforge
