#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/bits.hpp"
#include "driftlab/rng.hpp"
#include "driftlab/trajectory.hpp"

namespace driftlab::sat2 {

struct Literal {
  std::uint32_t var = 0;
  bool negated = false;

  bool satisfied_by(const Bits& a) const { return (a[var] != 0) != negated; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  Literal first;
  Literal second;

  bool satisfied_by(const Bits& a) const { return first.satisfied_by(a) || second.satisfied_by(a); }
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct TwoCnfFormula {
  std::uint32_t n = 0;
  std::vector<Clause> clauses;

  // Throws std::invalid_argument if a literal references a variable >= n.
  void validate() const;
  bool satisfied_by(const Bits& a) const;
  // Lowest index of an unsatisfied clause.
  std::optional<std::size_t> first_unsatisfied(const Bits& a) const;

  friend bool operator==(const TwoCnfFormula&, const TwoCnfFormula&) = default;
};

using Assignment = Bits;

struct PlantedInstance {
  TwoCnfFormula formula;
  Assignment witness;
};

// Uniform witness; each clause uniform over the ordered literal pairs the
// witness satisfies (tautologies and repeats allowed). Requires n >= 1.
PlantedInstance generate_planted(RngStream& stream, std::uint32_t n, std::size_t m);

Assignment random_assignment(RngStream& stream, std::uint32_t n);

// Number of positions where a and reference agree. Throws
// std::invalid_argument on length mismatch.
std::uint32_t agreement_count(const Assignment& a, const Assignment& reference);

struct WalkOutcome {
  Assignment final;
  std::uint64_t iterations = 0;
  bool censored = false;
  std::optional<Trajectory> trajectory;  // agreement with `reference` per step
};

// Randomised 2-SAT walk: repeatedly take the lowest-index unsatisfied clause,
// pick one of its two literals uniformly and flip that variable. Stops when
// every clause holds or after `cap` flips.
WalkOutcome run_walk(const TwoCnfFormula& formula, Assignment init, RngStream& stream,
                     std::uint64_t cap, const Assignment* reference = nullptr);

// DIMACS CNF restricted to width-2 clauses. Throws FormatError with the line
// of the offending clause or header.
TwoCnfFormula parse_dimacs(std::string_view text);
// Normalized form: `p cnf n m` header, one clause per line.
std::string emit_dimacs(const TwoCnfFormula& formula);

}  // namespace driftlab::sat2
