#pragma once

#include <string>
#include <vector>

#include "spek/closure.hpp"
#include "spek/relation.hpp"

namespace spek {

// One line of a verification report: "PASS <check> <detail>".
struct CheckResult {
  bool pass = false;
  std::string check;
  std::string detail;

  std::string line() const { return std::string(pass ? "PASS " : "FAIL ") + check + (detail.empty() ? "" : " " + detail); }
};

struct KbpVerdict {
  bool global_ok = false;
  bool maximal_knowledge = false;  // exactly 2^n tuples
  // Every nonempty proper subset of legs, as a bit mask, with its verdict.
  std::vector<std::pair<unsigned, bool>> subsystems;

  bool ok() const;
};

// Cardinality in {2^n, ..., 2^(2n)} globally and for every marginal.
KbpVerdict check_kbp(const Relation& state);

// Basis-structure laws for (delta: A -> A^2, eps: A -> I), plus the snake
// equations for eta = delta . eps+.
std::vector<CheckResult> check_basis_structure(const Relation& delta, const Relation& eps, const std::string& label);

// Bending between states of arity 2 and maps 1 -> 1: both directions are
// checked against an independent map-picture closure.
std::vector<CheckResult> check_map_state_duality(const ClosureReport& states, const HomSets& maps);

// Spek states have exactly 2^n tuples; MSpek states 2^n .. 2^(2n); capping
// a leg of a Spek state with bot+ halves the count or keeps it.
std::vector<CheckResult> check_mspek_cardinalities(const ClosureReport& spek, const ClosureReport& mspek);

// Cardinality check for one state (used for injected states).
CheckResult check_state_cardinality(const Relation& state, Theory theory);

// The GHZ-like state (delta (x) id) . delta . eps+ with one leg bent through
// the converse of Ψ_Spek.
Relation ghz_state();
Relation delta_from_ghz();
std::vector<CheckResult> ghz_delta_identity();

}  // namespace spek
