#include "eaforge/function_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "eaforge/finite_field.hpp"

namespace eaforge {

ParseError::ParseError(std::size_t line, const std::string& reason)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + reason : reason), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok, int base, std::size_t line, const char* what) {
  if (base == 16 && tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) tok = tok.substr(2);
  T v{};
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (tok.empty() || r.ec != std::errc() || r.ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  return v;
}

Vbf parse_truth_table(const std::vector<std::string_view>& tok, std::size_t line) {
  if (tok.size() < 3) throw ParseError(line, "T record needs n and m");
  const auto n = parse_number<unsigned>(tok[1], 10, line, "input dimension");
  const auto m = parse_number<unsigned>(tok[2], 10, line, "output dimension");
  if (n > kMaxInputBits || m > kMaxOutputBits || m == 0)
    throw ParseError(line, "unsupported dimensions " + std::to_string(n) + "x" + std::to_string(m));
  const std::size_t size = std::size_t{1} << n;
  if (tok.size() - 3 != size)
    throw ParseError(line, "expected " + std::to_string(size) + " table entries, found " + std::to_string(tok.size() - 3));
  std::vector<std::uint32_t> table(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto v = parse_number<std::uint64_t>(tok[3 + i], 16, line, "table entry");
    if (m < 64 && (v >> m)) throw ParseError(line, "entry " + std::to_string(i) + " exceeds " + std::to_string(m) + " bits");
    table[i] = static_cast<std::uint32_t>(v);
  }
  return Vbf(n, m, std::move(table));
}

Vbf parse_univariate(const std::vector<std::string_view>& tok, std::size_t line) {
  if (tok.size() < 4) throw ParseError(line, "U record needs n, modulus and terms");
  const auto n = parse_number<unsigned>(tok[1], 10, line, "field degree");
  const auto modulus = parse_number<std::uint32_t>(tok[2], 16, line, "modulus");
  std::string terms;
  for (std::size_t i = 3; i < tok.size(); ++i) terms += tok[i];
  try {
    const FieldSpec field(n, modulus);
    std::vector<UnivariateTerm> parsed;
    std::string_view rest = terms;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto colon = item.rfind(':');
      if (colon == std::string_view::npos) throw ParseError(line, "term '" + std::string(item) + "' lacks ':'");
      const auto coef = parse_coefficient(item.substr(0, colon), field);
      const auto exp = parse_number<std::uint64_t>(item.substr(colon + 1), 10, line, "exponent");
      parsed.push_back(UnivariateTerm{coef, exp});
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (rest.empty()) throw ParseError(line, "trailing comma in term list");
    }
    return vbf_from_univariate(UnivariateSpec(field, std::move(parsed)));
  } catch (const FieldError& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

std::vector<FunctionRecord> parse_function_records(std::istream& in) {
  std::vector<FunctionRecord> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    const auto tok = split_ws(s);
    if (tok.empty()) continue;
    if (tok[0] == "T")
      out.push_back({parse_truth_table(tok, line), line});
    else if (tok[0] == "U")
      out.push_back({parse_univariate(tok, line), line});
    else
      throw ParseError(line, "unknown record type '" + std::string(tok[0]) + "'");
  }
  return out;
}

std::vector<Vbf> parse_function_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Vbf> out;
  for (auto& r : parse_function_records(in)) out.push_back(std::move(r.f));
  return out;
}

std::vector<Vbf> parse_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::vector<Vbf> out;
  for (auto& r : parse_function_records(in)) out.push_back(std::move(r.f));
  return out;
}

std::string format_truth_table(const Vbf& f) {
  std::string s = "T " + std::to_string(f.n()) + " " + std::to_string(f.m());
  char buf[16];
  for (auto y : f.table()) {
    const auto r = std::to_chars(buf, buf + sizeof buf, y, 16);
    s += ' ';
    s.append(buf, r.ptr);
  }
  return s;
}

}  // namespace eaforge
