#include "spek/signature.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_set>

#include "spek/capacity.hpp"
#include "spek/error.hpp"

namespace spek {

namespace {

// Enumerating type assignments is exponential in the zone count.
constexpr int kMaxEnumeratedZones = 24;

struct ShadowParities {
  int psi0;
  int psi1;
};

ShadowParities shadow_parities(const Diagram& d) {
  return {halfspek_parity(half_shadow(d, Side::S12)), halfspek_parity(half_shadow(d, Side::S34))};
}

int parity_of(const ZoneProfile& p, const std::vector<int>& types) {
  int parity = p.psi(types[static_cast<std::size_t>(p.zone)]);
  for (int j : p.adjacency) parity ^= types[static_cast<std::size_t>(p.zone)] ^ types[static_cast<std::size_t>(j)];
  return parity;
}

void require_zone_count(int m) {
  if (m > kMaxEnumeratedZones)
    throw CapacityExceeded("closed form over " + std::to_string(m) + " zones exceeds the enumeration limit of " +
                           std::to_string(kMaxEnumeratedZones));
}

}  // namespace

int halfspek_parity(const Diagram& d) {
  if (d.theory != Theory::HalfSpek) throw Error("halfspek_parity expects a HalfSpek diagram");
  int sigmas = 0;
  for (const auto& b : d.boxes)
    if (b.gen.tag == GenTag::Perm && !b.gen.perm->is_identity()) ++sigmas;
  return sigmas % 2 == 0 ? kEven : kOdd;
}

Diagram half_shadow(const Diagram& d, Side side) {
  Diagram out = d;
  out.theory = Theory::HalfSpek;
  for (auto& b : out.boxes) b.gen = half_component(b.gen, side);
  return out;
}

std::vector<ZoneProfile> zone_profiles(const ZoneDecomposition& z) {
  std::vector<ZoneProfile> out;
  for (int i = 0; i < z.zone_count(); ++i) {
    const auto [psi0, psi1] = shadow_parities(z.standalone[static_cast<std::size_t>(i)]);
    ZoneProfile p;
    p.zone = i;
    p.psi0 = psi0;
    p.psi1 = psi1;
    p.adjacency = z.neighbours(i);
    p.leg_count = z.own_legs[static_cast<std::size_t>(i)];
    p.internal = p.leg_count == 0;
    out.push_back(std::move(p));
  }
  return out;
}

std::string ConstraintSystem::equation_text(int row) const {
  std::string lhs;
  const auto& r = system.rows[static_cast<std::size_t>(row)];
  for (std::size_t k = 0; k < r.size(); ++k)
    if (r[k]) lhs += (lhs.empty() ? "" : " + ") + std::string("T") + std::to_string(k + 1);
  if (lhs.empty()) lhs = "0";
  return lhs + " = " + std::to_string(system.rhs[static_cast<std::size_t>(row)]);
}

ConstraintSystem build_constraints(const ZoneDecomposition& z, const std::vector<ZoneProfile>& profiles) {
  ConstraintSystem cs;
  cs.system.vars = z.zone_count();
  for (int i : z.internal_zones) {
    const ZoneProfile& p = profiles[static_cast<std::size_t>(i)];
    // Ψ_i(T) = a + b T
    const int a = p.psi0;
    const int b = p.psi0 ^ p.psi1;
    std::vector<std::uint8_t> row(static_cast<std::size_t>(cs.system.vars), 0);
    row[static_cast<std::size_t>(i)] ^= static_cast<std::uint8_t>(b);
    for (int j : p.adjacency) {
      row[static_cast<std::size_t>(i)] ^= 1;
      row[static_cast<std::size_t>(j)] ^= 1;
    }
    cs.system.add_row(std::move(row), static_cast<std::uint8_t>(kEven ^ a));
    cs.row_zone.push_back(i);
  }
  cs.solved = gf2_solve(cs.system);
  return cs;
}

int StateForm::legs() const {
  int n = 0;
  for (int k : zone_legs) n += k;
  return n;
}

std::uint64_t StateForm::tuples_per_block() const {
  return std::uint64_t{1} << (legs() - static_cast<int>(zone_legs.size()));
}

StateForm phased_form(const Diagram& d) {
  if (d.theory != Theory::Spek) throw Error("phased_form expects a Spek diagram");
  for (const auto& b : d.boxes)
    if (!b.gen.is_phased()) throw NotParallel("phased_form: box " + b.id + " (" + b.gen.dsl_name() + ") is unphased");
  const ZoneDecomposition z = zone_decompose(d);
  if (z.zone_count() > 1) throw Error("phased_form expects a connected diagram");
  const auto [psi0, psi1] = shadow_parities(d);
  StateForm form;
  const int n = static_cast<int>(d.legs.size());
  if (n == 0) {
    form.empty = psi0 == kOdd && psi1 == kOdd;
    if (!form.empty) form.blocks.push_back({});
    return form;
  }
  form.zone_ids = {0};
  form.zone_legs = {n};
  form.blocks = {{{psi0}, {kType12}}, {{psi1}, {kType34}}};
  std::sort(form.blocks.begin(), form.blocks.end());
  return form;
}

StateForm external_form(const ZoneDecomposition& z, const std::vector<ZoneProfile>& profiles) {
  if (!z.internal_zones.empty()) throw Error("external_form: diagram has internal zones");
  return internal_form(z, profiles);
}

StateForm internal_form(const ZoneDecomposition& z, const std::vector<ZoneProfile>& profiles) {
  const int m = z.zone_count();
  require_zone_count(m);
  const ConstraintSystem cs = build_constraints(z, profiles);

  StateForm form;
  form.zone_ids = z.external_zones;
  for (int i : z.external_zones) form.zone_legs.push_back(z.own_legs[static_cast<std::size_t>(i)]);
  for (int r = 0; r < cs.p(); ++r) form.constraints.push_back(cs.equation_text(r));

  std::map<BlockSignature, std::uint64_t> hits;
  std::vector<int> types(static_cast<std::size_t>(m));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    for (int i = 0; i < m; ++i) types[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1U);
    bool survives = true;
    for (int i : z.internal_zones)
      if (parity_of(profiles[static_cast<std::size_t>(i)], types) != kEven) {
        survives = false;
        break;
      }
    if (!survives) continue;
    BlockSignature sig;
    for (int i : z.external_zones) {
      sig.type.push_back(types[static_cast<std::size_t>(i)]);
      sig.parity.push_back(parity_of(profiles[static_cast<std::size_t>(i)], types));
    }
    ++hits[sig];
  }
  form.empty = hits.empty();
  for (const auto& [sig, count] : hits) {
    form.blocks.push_back(sig);
    form.duplication = std::max(form.duplication, count);
  }
  return form;
}

StateForm closed_form(const Diagram& d) {
  const ZoneDecomposition z = zone_decompose(d);
  return internal_form(z, zone_profiles(z));
}

DuplicationReport duplication_analysis(const ConstraintSystem& cs, const ZoneDecomposition& z) {
  if (!cs.consistent()) throw Error("duplication analysis needs a consistent constraint system");
  const int q = static_cast<int>(z.internal_zones.size());
  if (q > 16) throw CapacityExceeded("ACS search is limited to 16 internal zones");
  DuplicationReport rep;
  rep.zones = z.zone_count();
  rep.p = cs.p();
  rep.rank = cs.rank();
  rep.factor = std::uint64_t{1} << (rep.p - rep.rank);
  rep.distinct_blocks = std::uint64_t{1} << (rep.zones - rep.p);

  // nIAZ parity vector of each internal zone, over the external zones.
  std::vector<std::uint64_t> niaz(static_cast<std::size_t>(q), 0);
  for (int k = 0; k < q; ++k)
    for (int j : z.neighbours(z.internal_zones[static_cast<std::size_t>(k)])) {
      const auto pos = std::find(z.external_zones.begin(), z.external_zones.end(), j);
      if (pos != z.external_zones.end()) niaz[static_cast<std::size_t>(k)] ^= std::uint64_t{1} << (pos - z.external_zones.begin());
    }

  std::vector<std::uint32_t> subsets;
  for (std::uint32_t s = 1; s < (1U << q); ++s) subsets.push_back(s);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  std::vector<std::uint32_t> found;
  for (std::uint32_t s : subsets) {
    if (std::any_of(found.begin(), found.end(), [&](std::uint32_t f) { return (f & s) == f; })) continue;
    std::uint64_t x = 0;
    for (int k = 0; k < q; ++k)
      if (s >> k & 1U) x ^= niaz[static_cast<std::size_t>(k)];
    if (x == 0) found.push_back(s);
  }
  for (std::uint32_t s : found) {
    std::vector<int> set;
    for (int k = 0; k < q; ++k)
      if (s >> k & 1U) set.push_back(z.internal_zones[static_cast<std::size_t>(k)]);
    rep.acs.push_back(std::move(set));
  }
  return rep;
}

Relation expand(const StateForm& form) {
  const int n = form.legs();
  Relation shape(kBaseIV, 0, n);
  if (form.empty) return shape;
  std::unordered_set<std::uint64_t> keys;
  auto key_of = [](const BlockSignature& s) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < s.type.size(); ++i)
      k |= static_cast<std::uint64_t>(s.type[i] * 2 + s.parity[i]) << (2 * i);
    return k;
  };
  for (const auto& b : form.blocks) keys.insert(key_of(b));

  const std::uint64_t cols = shape.cod_size();
  std::vector<std::uint64_t> words(shape.words_per_row(), 0);
  for (std::uint64_t c = 0; c < cols; ++c) {
    const Tuple t = tuple_at(c, kBaseIV, n);
    std::uint64_t key = 0;
    bool ok = true;
    std::size_t leg = 0;
    for (std::size_t zi = 0; zi < form.zone_legs.size() && ok; ++zi) {
      const int type = t[leg] >= 3 ? kType34 : kType12;
      int marked = 0;
      for (int k = 0; k < form.zone_legs[zi]; ++k, ++leg) {
        const Digit dgt = t[leg];
        if ((dgt >= 3 ? kType34 : kType12) != type) ok = false;
        if (dgt == 2 || dgt == 4) ++marked;
      }
      const int parity = marked % 2 == 0 ? kEven : kOdd;
      key |= static_cast<std::uint64_t>(type * 2 + parity) << (2 * zi);
    }
    if (ok && keys.count(key)) words[c / 64] |= std::uint64_t{1} << (c % 64);
  }
  return Relation::from_words(kBaseIV, 0, n, std::move(words));
}

Relation expand_in_diagram_order(const StateForm& form, const ZoneDecomposition& z) {
  const Relation r = expand(form);
  std::vector<int> inverse(z.leg_order.size());
  for (std::size_t k = 0; k < z.leg_order.size(); ++k) inverse[static_cast<std::size_t>(z.leg_order[k])] = static_cast<int>(k);
  return permute_legs(r, inverse);
}

}  // namespace spek
