#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <set>

#include "spek/error.hpp"
#include "spek/verification.hpp"

using namespace spek;

namespace {

const ClosureReport& spek3() {
  static const ClosureReport r = [] {
    ClosureOptions o;
    o.arity_bound = 3;
    return enumerate_closure(o);
  }();
  return r;
}

const ClosureReport& mspek3() {
  static const ClosureReport r = [] {
    ClosureOptions o;
    o.theory = Theory::MSpek;
    o.arity_bound = 3;
    return enumerate_closure(o);
  }();
  return r;
}

std::set<std::string> keys(const std::vector<Relation>& rs, bool with_empty = false) {
  std::set<std::string> out;
  for (const auto& r : rs)
    if (with_empty || !r.empty()) out.insert(r.key());
  return out;
}

Relation st(std::vector<Tuple> ts) { return Relation::state(kBaseIV, static_cast<int>(ts.front().size()), ts); }

// Digit -> (type, parity bit) in GF(2)^2: 1=(0,0) 2=(0,1) 3=(1,0) 4=(1,1).
// A tuple of n digits is a vector in GF(2)^(2n), packed as type bits at even
// and parity bits at odd positions.
Tuple decode(unsigned v, int n) {
  Tuple t;
  for (int i = 0; i < n; ++i) t.push_back(static_cast<Digit>((v >> (2 * i) & 3U) + 1));
  return t;
}

// Σ_i (t_i q'_i + q_i t'_i).
int omega(unsigned u, unsigned v, int n) {
  int acc = 0;
  for (int i = 0; i < n; ++i) {
    const unsigned a = u >> (2 * i), b = v >> (2 * i);
    acc ^= static_cast<int>(((a >> 1) & b & 1U) ^ (a & (b >> 1) & 1U));
  }
  return acc;
}

// Affine cosets of Lagrangian subspaces of GF(2)^(2n), built from spanning
// sets with no reference to diagrams or generators.
std::set<std::string> lagrangian_cosets(int n) {
  const unsigned dim = 1U << (2 * n);
  std::set<std::vector<unsigned>> spaces;
  std::vector<unsigned> basis;
  std::function<void(unsigned)> grow = [&](unsigned from) {
    // span of the current basis
    std::vector<unsigned> span{0};
    for (unsigned b : basis) {
      const std::size_t k = span.size();
      for (std::size_t i = 0; i < k; ++i) span.push_back(span[i] ^ b);
    }
    if (static_cast<int>(basis.size()) == n) {
      std::sort(span.begin(), span.end());
      spaces.insert(span);
      return;
    }
    for (unsigned v = from; v < dim; ++v) {
      if (std::find(span.begin(), span.end(), v) != span.end()) continue;
      bool iso = true;
      for (unsigned b : basis) iso = iso && omega(v, b, n) == 0;
      if (!iso) continue;
      basis.push_back(v);
      grow(v + 1);
      basis.pop_back();
    }
  };
  grow(1);
  std::set<std::string> out;
  for (const auto& s : spaces)
    for (unsigned shift = 0; shift < dim; ++shift) {
      std::vector<Tuple> ts;
      for (unsigned v : s) ts.push_back(decode(v ^ shift, n));
      out.insert(Relation::state(kBaseIV, n, ts).key());
    }
  return out;
}

}  // namespace

TEST_CASE("one system: six states, seven with MSpek") {
  const auto six = spek3().states_of_arity(1);
  const std::set<std::string> expected = keys({st({{1}, {2}}), st({{3}, {4}}), st({{1}, {3}}), st({{2}, {4}}), st({{1}, {4}}),
                                               st({{2}, {3}})});
  CHECK(keys(six) == expected);
  auto with_full = expected;
  with_full.insert(st({{1}, {2}, {3}, {4}}).key());
  CHECK(keys(mspek3().states_of_arity(1)) == with_full);
}

TEST_CASE("Spek state counts agree with the Lagrangian-coset filter") {
  CHECK(lagrangian_cosets(1).size() == 6);
  for (int n = 1; n <= 3; ++n) CHECK(keys(spek3().states_of_arity(n)) == lagrangian_cosets(n));
  CHECK(keys(spek3().states_of_arity(2)).size() == 60);
  CHECK(keys(spek3().states_of_arity(3)).size() == 1080);
  CHECK(spek3().complete);
}

TEST_CASE("the empty relation is reported separately") {
  for (int n = 0; n <= 3; ++n) {
    const auto all = spek3().states_of_arity(n);
    CHECK(keys(all, true).size() == keys(all).size() + 1);
  }
}

TEST_CASE("closure is deterministic") {
  ClosureOptions o;
  o.arity_bound = 2;
  const ClosureReport a = enumerate_closure(o), b = enumerate_closure(o);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    CHECK(a.states[k] == b.states[k]);
    CHECK(a.witness_text(static_cast<int>(k)) == b.witness_text(static_cast<int>(k)));
  }
}

TEST_CASE("every witness re-evaluates to its state") {
  for (const ClosureReport* rep : {&spek3(), &mspek3()})
    for (std::size_t k = 0; k < rep->states.size(); ++k) {
      const std::string w = rep->witness_text(static_cast<int>(k));
      CHECK_MESSAGE(evaluate_witness(w, rep->theory) == rep->states[k], w);
    }
}

TEST_CASE("a tiny step budget yields an incomplete report") {
  ClosureOptions o;
  o.arity_bound = 3;
  o.step_bound = 1000;
  const ClosureReport r = enumerate_closure(o);
  CHECK_FALSE(r.complete);
  CHECK_FALSE(r.note.empty());
  o.arity_bound = 0;
  CHECK_THROWS(enumerate_closure(o));
}

TEST_CASE("knowledge balance") {
  const KbpVerdict psi = check_kbp(cup({kBaseIV, 1}));
  CHECK(psi.global_ok);
  CHECK(psi.maximal_knowledge);
  CHECK(psi.ok());
  const KbpVerdict bad = check_kbp(st({{1, 1}, {1, 2}, {1, 3}, {1, 4}}));
  CHECK(bad.global_ok);
  CHECK_FALSE(bad.ok());
  CHECK_THROWS_AS(check_kbp(identity({kBaseIV, 1})), TypeMismatch);

  for (const ClosureReport* rep : {&spek3(), &mspek3()})
    for (const auto& s : rep->states)
      if (!s.empty()) CHECK(check_kbp(s).ok());
}

TEST_CASE("cardinalities") {
  for (const auto& r : check_mspek_cardinalities(spek3(), mspek3())) CHECK_MESSAGE(r.pass, r.line());
  CHECK_FALSE(check_state_cardinality(st({{1}, {2}, {3}}), Theory::MSpek).pass);
  CHECK_FALSE(check_state_cardinality(st({{1}, {2}, {3}, {4}}), Theory::Spek).pass);
  CHECK(check_state_cardinality(st({{1}, {2}, {3}, {4}}), Theory::MSpek).pass);
}

TEST_CASE("basis structure laws") {
  for (Theory t : {Theory::Spek, Theory::HalfSpek}) {
    const auto results = check_basis_structure(resolve(GeneratorId::of(GenTag::Delta, t)),
                                               resolve(GeneratorId::of(GenTag::Epsilon, t)), theory_name(t));
    CHECK(results.size() == 9);
    for (const auto& r : results) CHECK_MESSAGE(r.pass, r.line());
  }
  const auto with_bot = check_basis_structure(resolve(GeneratorId::of(GenTag::Delta, Theory::MSpek)),
                                              resolve(GeneratorId::of(GenTag::BottomDagger, Theory::MSpek)), "bot");
  for (const auto& r : with_bot)
    if (r.check.find("counit") != std::string::npos) CHECK_FALSE(r.pass);
  CHECK_THROWS_AS(check_basis_structure(identity({kBaseIV, 1}), identity({kBaseIV, 1}), "x"), TypeMismatch);
}

TEST_CASE("map-state duality") {
  const HomSets maps = enumerate_map_closure(Theory::Spek, 3);
  CHECK(maps.at({1, 1}).size() == spek3().states_of_arity(2).size());
  for (const auto& r : check_map_state_duality(spek3(), maps)) CHECK_MESSAGE(r.pass, r.line());
}

TEST_CASE("GHZ construction of delta") {
  const Relation g = ghz_state();
  CHECK(g.count() == 8);
  CHECK(g == st({{1, 1, 1}, {1, 2, 2}, {2, 1, 2}, {2, 2, 1}, {3, 3, 3}, {3, 4, 4}, {4, 3, 4}, {4, 4, 3}}));
  CHECK(delta_from_ghz() == resolve(GeneratorId::of(GenTag::Delta, Theory::Spek)));
  for (const auto& r : ghz_delta_identity()) CHECK_MESSAGE(r.pass, r.line());
}
