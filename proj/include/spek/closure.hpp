#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spek/generators.hpp"
#include "spek/relation.hpp"

namespace spek {

struct ClosureOptions {
  Theory theory = Theory::Spek;
  int arity_bound = 3;  // largest state arity kept, also the bound on intermediates
  std::uint64_t step_bound = 200'000'000;  // candidate operations before giving up
};

// How a state was first reached. Leg indices are 0-based.
struct Witness {
  enum class Op { Gen, Tensor, Link, Loop, Swap };
  Op op = Op::Gen;
  std::string gen;  // Op::Gen: generator spelling, bent to a state
  int a = -1;       // operand state indices
  int b = -1;
  int i = 0;  // leg of a (Link, Loop, Swap)
  int j = 0;  // leg of b (Link) or second leg of a (Loop)
};

// Breadth-first closure of the theory's states (every leg an output) under
// tensor, link (join a leg of one state to a leg of another through the
// cup), loop (join two legs of one state) and adjacent leg swap. Because
// the cup is the diagonal, these are exactly the Spek composites; maps are
// recovered by bending.
struct ClosureReport {
  Theory theory = Theory::Spek;
  int arity_bound = 0;
  bool complete = true;
  std::string note;  // why the run stopped early, if it did
  std::uint64_t steps = 0;
  int rounds = 0;
  std::vector<Relation> states;  // sorted by (arity, key) within each round
  std::vector<Witness> witnesses;

  std::vector<Relation> states_of_arity(int n) const;
  // Term such as link(delta,0,eps+,0); re-evaluated by evaluate_witness.
  std::string witness_text(int index) const;
};

ClosureReport enumerate_closure(const ClosureOptions& options);

// Evaluates a witness term with compose/tensor and the compact structure
// only (no shortcuts shared with the enumerator).
Relation evaluate_witness(std::string_view term, Theory theory);

// The generator relations as states, bent with the cup.
std::vector<std::pair<std::string, Relation>> generator_states(Theory theory);

// Hom-sets (m, n) with m + n <= total_bound, closed under compose, tensor
// and converse starting from the theory's generators directly as maps. The
// symmetry swap (arity 2 -> 2) is included only when total_bound >= 4.
using HomSets = std::map<std::pair<int, int>, std::vector<Relation>>;
HomSets enumerate_map_closure(Theory theory, int total_bound);

}  // namespace spek
