#include "spek/verification.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_set>

#include "spek/error.hpp"
#include "spek/generators.hpp"

namespace spek {

namespace {

bool kbp_count(std::uint64_t count, int n) {
  if (!std::has_single_bit(count)) return false;
  const int log = std::countr_zero(count);
  return log >= n && log <= 2 * n;
}

CheckResult law(const std::string& label, const std::string& name, const Relation& lhs, const Relation& rhs) {
  return {lhs == rhs, label + "/" + name, lhs == rhs ? "" : "(" + std::to_string(lhs.count()) + " vs " + std::to_string(rhs.count()) + " pairs)"};
}

std::string count_detail(std::size_t a, std::size_t b) { return std::to_string(a) + " vs " + std::to_string(b); }

}  // namespace

bool KbpVerdict::ok() const {
  return global_ok && std::all_of(subsystems.begin(), subsystems.end(), [](const auto& s) { return s.second; });
}

KbpVerdict check_kbp(const Relation& state) {
  if (!state.is_state()) throw TypeMismatch("check_kbp expects a state");
  const int n = state.cod_arity();
  KbpVerdict v;
  const std::uint64_t count = state.count();
  v.global_ok = kbp_count(count, n);
  v.maximal_knowledge = count == (std::uint64_t{1} << n);
  for (unsigned mask = 1; n > 1 && mask + 1 < (1U << n); ++mask) {
    std::set<int> keep;
    for (int k = 0; k < n; ++k)
      if (mask >> k & 1U) keep.insert(k);
    v.subsystems.emplace_back(mask, kbp_count(marginal(state, keep).count(), static_cast<int>(keep.size())));
  }
  return v;
}

std::vector<CheckResult> check_basis_structure(const Relation& delta, const Relation& eps, const std::string& label) {
  if (delta.dom_arity() != 1 || delta.cod_arity() != 2) throw TypeMismatch("delta must be A -> A^2");
  if (eps.dom_arity() != 1 || eps.cod_arity() != 0 || eps.base() != delta.base()) throw TypeMismatch("eps must be A -> I");
  const OnticSpace a{delta.base(), 1};
  const Relation id = identity(a);
  const Relation dd = converse(delta);
  const Relation eta = compose(converse(eps), delta);
  std::vector<CheckResult> out;
  out.push_back(law(label, "coassociativity", compose(delta, tensor(delta, id)), compose(delta, tensor(id, delta))));
  out.push_back(law(label, "cocommutativity", compose(delta, swap(a, a)), delta));
  out.push_back(law(label, "counit-left", compose(delta, tensor(eps, id)), id));
  out.push_back(law(label, "counit-right", compose(delta, tensor(id, eps)), id));
  out.push_back(law(label, "isometry", compose(delta, dd), id));
  out.push_back(law(label, "frobenius-left", compose(tensor(id, delta), tensor(dd, id)), compose(dd, delta)));
  out.push_back(law(label, "frobenius-right", compose(tensor(delta, id), tensor(id, dd)), compose(dd, delta)));
  out.push_back(law(label, "snake-left", compose(tensor(eta, id), tensor(id, converse(eta))), id));
  out.push_back(law(label, "snake-right", compose(tensor(id, eta), tensor(converse(eta), id)), id));
  return out;
}

std::vector<CheckResult> check_map_state_duality(const ClosureReport& states, const HomSets& maps) {
  std::vector<CheckResult> out;
  const auto two = states.states_of_arity(2);
  const auto it = maps.find({1, 1});
  const std::vector<Relation> endo = it == maps.end() ? std::vector<Relation>{} : it->second;

  std::unordered_set<Relation, RelationHash> bent;
  bool round_trip = true;
  for (const auto& s : two) {
    const Relation m = bend_to_map(s, 1);
    if (bend_to_state(m) != s) round_trip = false;
    bent.insert(m);
  }
  out.push_back({two.size() == endo.size(), "duality/cardinality", "Spek(I,IV^2)=" + std::to_string(two.size()) +
                                                                      " Spek(IV,IV)=" + std::to_string(endo.size())});
  out.push_back({bent.size() == two.size(), "duality/injective", count_detail(bent.size(), two.size())});
  out.push_back({round_trip, "duality/round-trip", ""});
  const bool same = std::all_of(endo.begin(), endo.end(), [&](const Relation& r) { return bent.count(r) > 0; }) &&
                    bent.size() == endo.size();
  out.push_back({same, "duality/image", "bent states equal the map closure"});

  bool closed = true;
  for (const auto& f : bent) {
    if (!bent.count(converse(f))) closed = false;
    for (const auto& g : bent)
      if (!bent.count(compose(f, g))) closed = false;
  }
  out.push_back({closed, "duality/closed", "image closed under compose and converse"});

  const Relation psi = cup({kBaseIV, 1});
  const bool psi_found = std::find(two.begin(), two.end(), psi) != two.end();
  out.push_back({bend_to_state(identity({kBaseIV, 1})) == psi && bend_to_map(psi, 1) == identity({kBaseIV, 1}) && psi_found,
                 "duality/identity-psi", "identity(IV) <-> {11,22,33,44}"});

  const auto one = states.states_of_arity(1);
  const auto eff = maps.find({1, 0});
  std::unordered_set<Relation, RelationHash> conv;
  for (const auto& s : one) conv.insert(converse(s));
  bool effects = eff != maps.end() && eff->second.size() == conv.size();
  if (effects)
    for (const auto& e : eff->second) effects = effects && conv.count(e) > 0;
  out.push_back({effects, "duality/states-effects",
                 "converse: " + std::to_string(one.size()) + " states, " +
                     std::to_string(eff == maps.end() ? 0 : eff->second.size()) + " effects"});
  return out;
}

CheckResult check_state_cardinality(const Relation& state, Theory theory) {
  const int n = state.cod_arity();
  const std::uint64_t c = state.count();
  const std::string detail = "n=" + std::to_string(n) + " count=" + std::to_string(c);
  if (theory == Theory::Spek) return {c == (std::uint64_t{1} << n), "cardinality/spek-state", detail};
  return {kbp_count(c, n), "cardinality/mspek-state", detail};
}

std::vector<CheckResult> check_mspek_cardinalities(const ClosureReport& spek, const ClosureReport& mspek) {
  std::vector<CheckResult> out;
  std::size_t empties = 0, bad_spek = 0, bad_mspek = 0, bad_cap = 0, caps = 0;
  for (const auto& s : spek.states) {
    if (s.empty()) {
      ++empties;
      continue;
    }
    if (!check_state_cardinality(s, Theory::Spek).pass) ++bad_spek;
    const std::uint64_t c = s.count();
    for (int leg = 0; leg < s.cod_arity(); ++leg) {
      std::set<int> keep;
      for (int k = 0; k < s.cod_arity(); ++k)
        if (k != leg) keep.insert(k);
      // bot+ on one leg is digit deletion.
      const std::uint64_t capped = marginal(s, keep).count();
      ++caps;
      if (capped != c && 2 * capped != c) ++bad_cap;
    }
  }
  out.push_back({bad_spek == 0, "cardinality/spek", std::to_string(spek.states.size() - empties) + " states, " +
                                                      std::to_string(bad_spek) + " not 2^n (empty relation skipped)"});
  std::set<std::uint64_t> n1;
  for (const auto& s : mspek.states) {
    if (s.empty()) continue;
    if (!check_state_cardinality(s, Theory::MSpek).pass) ++bad_mspek;
    if (s.cod_arity() == 1) n1.insert(s.count());
  }
  out.push_back({bad_mspek == 0, "cardinality/mspek", std::to_string(bad_mspek) + " outside 2^n..2^2n"});
  out.push_back({std::all_of(n1.begin(), n1.end(), [](std::uint64_t c) { return c == 2 || c == 4; }), "cardinality/mspek-n1",
                 "observed {2,4}"});
  out.push_back({bad_cap == 0, "cardinality/bot-cap", std::to_string(caps) + " caps halve or preserve"});
  return out;
}

Relation ghz_state() {
  const Relation delta = resolve(GeneratorId::of(GenTag::Delta, Theory::Spek));
  const Relation eps_dag = resolve(GeneratorId::of(GenTag::EpsilonDagger, Theory::Spek));
  return compose(compose(eps_dag, delta), tensor(delta, identity({kBaseIV, 1})));
}

Relation delta_from_ghz() {
  // (Ψ† ⊗ id ⊗ id) ∘ (id ⊗ ghz)
  const Relation psi = cup({kBaseIV, 1});
  const Relation id = identity({kBaseIV, 1});
  return compose(tensor(id, ghz_state()), tensor(converse(psi), identity({kBaseIV, 2})));
}

std::vector<CheckResult> ghz_delta_identity() {
  const Relation delta = resolve(GeneratorId::of(GenTag::Delta, Theory::Spek));
  const Relation built = delta_from_ghz();
  const Relation g = ghz_state();
  std::vector<CheckResult> out;
  out.push_back({built == delta, "ghz/delta", "fixture (delta (x) id) . delta . eps+"});
  out.push_back({converse(built) == converse(delta), "ghz/delta-dagger", ""});
  out.push_back({check_kbp(g).ok() && g.count() == 8, "ghz/kbp", std::to_string(g.count()) + " tuples"});
  return out;
}

}  // namespace spek
