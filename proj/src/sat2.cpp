#include "driftlab/sat2.hpp"

#include <stdexcept>

namespace driftlab::sat2 {

void TwoCnfFormula::validate() const {
  for (const auto& c : clauses) {
    if (c.first.var >= n || c.second.var >= n) {
      throw std::invalid_argument("2-CNF clause references a variable outside [0, n)");
    }
  }
}

bool TwoCnfFormula::satisfied_by(const Bits& a) const { return !first_unsatisfied(a).has_value(); }

std::optional<std::size_t> TwoCnfFormula::first_unsatisfied(const Bits& a) const {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (!clauses[i].satisfied_by(a)) return i;
  }
  return std::nullopt;
}

Assignment random_assignment(RngStream& stream, std::uint32_t n) {
  Assignment a(n);
  std::uint64_t word = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = stream.next_u64();
    a[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return a;
}

PlantedInstance generate_planted(RngStream& stream, std::uint32_t n, std::size_t m) {
  if (n < 1) throw std::invalid_argument("generate_planted: n must be >= 1");
  PlantedInstance inst;
  inst.witness = random_assignment(stream, n);
  inst.formula.n = n;
  inst.formula.clauses.reserve(m);
  auto draw_literal = [&] {
    const std::uint64_t code = stream.next_index(2ull * n);
    return Literal{static_cast<std::uint32_t>(code / 2), (code % 2) != 0};
  };
  while (inst.formula.clauses.size() < m) {
    Clause c{draw_literal(), draw_literal()};
    // Rejection keeps the accepted clauses uniform over the satisfied ones.
    if (c.satisfied_by(inst.witness)) inst.formula.clauses.push_back(c);
  }
  return inst;
}

std::uint32_t agreement_count(const Assignment& a, const Assignment& reference) {
  if (a.size() != reference.size()) throw std::invalid_argument("agreement_count: length mismatch");
  std::uint32_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) count += (a[i] == reference[i]) ? 1u : 0u;
  return count;
}

WalkOutcome run_walk(const TwoCnfFormula& formula, Assignment init, RngStream& stream,
                     std::uint64_t cap, const Assignment* reference) {
  if (init.size() != formula.n) throw std::invalid_argument("run_walk: assignment length != n");
  WalkOutcome out;
  out.final = std::move(init);
  std::uint32_t agree = 0;
  if (reference != nullptr) {
    agree = agreement_count(out.final, *reference);
    out.trajectory.emplace();
    out.trajectory->cap = cap;
    out.trajectory->values.push_back(agree);
  }
  for (;;) {
    const auto unsat = formula.first_unsatisfied(out.final);
    if (!unsat) break;
    if (out.iterations == cap) {
      out.censored = true;
      break;
    }
    const Clause& c = formula.clauses[*unsat];
    const std::uint32_t var = stream.next_index(2) == 0 ? c.first.var : c.second.var;
    out.final[var] ^= 1u;
    ++out.iterations;
    if (reference != nullptr) {
      agree = (out.final[var] == (*reference)[var]) ? agree + 1 : agree - 1;
      out.trajectory->values.push_back(agree);
    }
  }
  if (out.trajectory) out.trajectory->censored = out.censored;
  return out;
}

}  // namespace driftlab::sat2
