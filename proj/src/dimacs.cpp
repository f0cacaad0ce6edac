#include <charconv>
#include <cstdlib>
#include <string>
#include <vector>

#include "driftlab/error.hpp"
#include "driftlab/sat2.hpp"

namespace driftlab::sat2 {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw FormatError(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

TwoCnfFormula parse_dimacs(std::string_view text) {
  TwoCnfFormula f;
  bool have_header = false;
  long long declared_clauses = 0;
  std::vector<long long> pending;
  std::size_t clause_line = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].starts_with('c')) continue;
    if (toks[0] == "%") break;  // SATLIB trailer
    if (toks[0] == "p") {
      if (have_header) throw FormatError(line_no, "duplicate problem line");
      if (toks.size() != 4 || toks[1] != "cnf") throw FormatError(line_no, "expected 'p cnf <vars> <clauses>'");
      const long long n = parse_int(toks[2], line_no);
      declared_clauses = parse_int(toks[3], line_no);
      if (n < 0 || n > 0xFFFFFFFFll || declared_clauses < 0) throw FormatError(line_no, "negative or oversized counts");
      f.n = static_cast<std::uint32_t>(n);
      have_header = true;
      continue;
    }
    if (!have_header) throw FormatError(line_no, "clause before 'p cnf' header");
    for (const auto tok : toks) {
      const long long lit = parse_int(tok, line_no);
      if (pending.empty()) clause_line = line_no;
      if (lit != 0) {
        if (std::llabs(lit) > static_cast<long long>(f.n)) {
          throw FormatError(line_no, "variable " + std::to_string(std::llabs(lit)) + " exceeds declared count " +
                                         std::to_string(f.n));
        }
        pending.push_back(lit);
        continue;
      }
      if (pending.size() != 2) {
        throw FormatError(clause_line, "clause has " + std::to_string(pending.size()) + " literals, expected 2");
      }
      auto to_literal = [](long long l) {
        return Literal{static_cast<std::uint32_t>(std::llabs(l) - 1), l < 0};
      };
      f.clauses.push_back({to_literal(pending[0]), to_literal(pending[1])});
      pending.clear();
    }
  }
  if (!have_header) throw FormatError(line_no, "missing 'p cnf' header");
  if (!pending.empty()) throw FormatError(clause_line, "unterminated clause (missing trailing 0)");
  if (static_cast<long long>(f.clauses.size()) != declared_clauses) {
    throw FormatError(line_no, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                   std::to_string(f.clauses.size()));
  }
  return f;
}

std::string emit_dimacs(const TwoCnfFormula& formula) {
  std::string out = "p cnf " + std::to_string(formula.n) + " " + std::to_string(formula.clauses.size()) + "\n";
  auto lit = [](const Literal& l) {
    const long long v = static_cast<long long>(l.var) + 1;
    return std::to_string(l.negated ? -v : v);
  };
  for (const auto& c : formula.clauses) out += lit(c.first) + " " + lit(c.second) + " 0\n";
  return out;
}

}  // namespace driftlab::sat2
