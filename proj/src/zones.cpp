#include "spek/zones.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "spek/error.hpp"

namespace spek {

namespace {

bool is_sigma(const Box& b) {
  return b.gen.tag == GenTag::Perm && b.gen.theory != Theory::HalfSpek && *b.gen.perm == sigma_permutation();
}

struct Normalized {
  Diagram d;
  std::vector<int> origin;  // original box index of each normalized box
};

Normalized sigma_normalize(const Diagram& src) {
  Normalized out;
  out.d.theory = src.theory;
  std::map<PortRef, PortRef> port_map;
  for (int b = 0; b < static_cast<int>(src.boxes.size()); ++b) {
    const Box& box = src.boxes[static_cast<std::size_t>(b)];
    if (box.gen.tag == GenTag::Perm && !box.gen.is_phased()) {
      const auto word = sigma_decompose(*box.gen.perm);
      int prev = -1, first = -1;
      for (std::size_t k = 0; k < word.size(); ++k) {
        const int nb = out.d.add_box(box.id + "_" + std::to_string(k), GeneratorId::of_perm(word[k], src.theory));
        out.origin.push_back(b);
        if (prev >= 0) out.d.connect({prev, PortKind::Cod, 0}, {nb, PortKind::Dom, 0});
        if (first < 0) first = nb;
        prev = nb;
      }
      port_map[{b, PortKind::Dom, 0}] = {first, PortKind::Dom, 0};
      port_map[{b, PortKind::Cod, 0}] = {prev, PortKind::Cod, 0};
    } else {
      const int nb = out.d.add_box(box.id, box.gen);
      out.origin.push_back(b);
      for (PortRef p : src.ports_of(b)) port_map[p] = {nb, p.kind, p.slot};
    }
  }
  for (const auto& w : src.wires) out.d.connect(port_map.at(w.a), port_map.at(w.b));
  for (const auto& l : src.legs) out.d.add_leg(port_map.at(l.port), LegDir::Out);

  // Separate Σ from Σ and from open legs with identity boxes, so every Σ end
  // lands on a phased box.
  auto sigma_port = [&](PortRef p) { return is_sigma(out.d.boxes[static_cast<std::size_t>(p.box)]); };
  auto insert_id = [&](PortRef near_sigma, int origin) {
    const int id = out.d.add_box(out.d.fresh_id("sid"), GeneratorId::of(GenTag::Identity, src.theory));
    out.origin.push_back(origin);
    out.d.connect(near_sigma, {id, PortKind::Dom, 0});
    return PortRef{id, PortKind::Cod, 0};
  };
  const std::size_t wire_count = out.d.wires.size();
  for (std::size_t k = 0; k < wire_count; ++k) {
    Wire w = out.d.wires[k];
    if (sigma_port(w.a) && sigma_port(w.b)) {
      const PortRef far = insert_id(w.a, out.origin[static_cast<std::size_t>(w.a.box)]);
      out.d.wires[k] = {far, w.b};
    }
  }
  for (auto& l : out.d.legs)
    if (sigma_port(l.port)) l.port = insert_id(l.port, out.origin[static_cast<std::size_t>(l.port.box)]);
  return out;
}

int find(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
  return x;
}

}  // namespace

std::vector<int> ZoneDecomposition::neighbours(int zone) const {
  std::vector<int> out;
  for (const auto& l : links) {
    if (l.a == zone) out.push_back(l.b);
    if (l.b == zone) out.push_back(l.a);
  }
  return out;
}

ZoneDecomposition zone_decompose(const Diagram& d) {
  if (d.theory != Theory::Spek) throw TheoryViolation("zone decomposition needs a Spek diagram, got " + theory_name(d.theory));
  d.validate();
  Normalized norm = sigma_normalize(d);
  const Diagram& nd = norm.d;
  const int nboxes = static_cast<int>(nd.boxes.size());

  std::vector<int> parent(static_cast<std::size_t>(nboxes));
  std::iota(parent.begin(), parent.end(), 0);
  std::map<PortRef, PortRef> partner;
  for (const auto& w : nd.wires) {
    partner[w.a] = w.b;
    partner[w.b] = w.a;
    const bool sa = is_sigma(nd.boxes[static_cast<std::size_t>(w.a.box)]);
    const bool sb = is_sigma(nd.boxes[static_cast<std::size_t>(w.b.box)]);
    if (!sa && !sb) parent[static_cast<std::size_t>(find(parent, w.a.box))] = find(parent, w.b.box);
  }

  std::map<int, std::vector<int>> groups;
  for (int b = 0; b < nboxes; ++b)
    if (!is_sigma(nd.boxes[static_cast<std::size_t>(b)])) groups[find(parent, b)].push_back(b);
  std::vector<std::vector<int>> zones;
  for (auto& [root, members] : groups) zones.push_back(members);
  auto rank = [&](const std::vector<int>& z) {
    int best = INT32_MAX;
    for (int b : z) best = std::min(best, norm.origin[static_cast<std::size_t>(b)]);
    return std::pair{best, z.front()};
  };
  std::sort(zones.begin(), zones.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });

  ZoneDecomposition z;
  z.zones = zones;
  std::vector<int> zone_of(static_cast<std::size_t>(nboxes), -1);
  for (int i = 0; i < z.zone_count(); ++i)
    for (int b : z.zones[static_cast<std::size_t>(i)]) zone_of[static_cast<std::size_t>(b)] = i;

  std::vector<std::pair<PortRef, PortRef>> link_ends;
  for (int b = 0; b < nboxes; ++b) {
    if (!is_sigma(nd.boxes[static_cast<std::size_t>(b)])) continue;
    const PortRef ea = partner.at({b, PortKind::Dom, 0});
    const PortRef eb = partner.at({b, PortKind::Cod, 0});
    z.links.push_back({zone_of[static_cast<std::size_t>(ea.box)], zone_of[static_cast<std::size_t>(eb.box)], b});
    link_ends.emplace_back(ea, eb);
  }

  for (const auto& l : nd.legs) z.leg_owner.push_back(zone_of[static_cast<std::size_t>(l.port.box)]);
  std::vector<int> legs_per_zone(zones.size(), 0);
  for (int o : z.leg_owner) ++legs_per_zone[static_cast<std::size_t>(o)];
  for (int i = 0; i < z.zone_count(); ++i)
    (legs_per_zone[static_cast<std::size_t>(i)] > 0 ? z.external_zones : z.internal_zones).push_back(i);
  z.own_legs = legs_per_zone;
  for (int i = 0; i < z.zone_count(); ++i)
    for (int k = 0; k < static_cast<int>(z.leg_owner.size()); ++k)
      if (z.leg_owner[static_cast<std::size_t>(k)] == i) z.leg_order.push_back(k);

  for (int i = 0; i < z.zone_count(); ++i) {
    Diagram s;
    s.theory = nd.theory;
    std::map<int, int> renumber;
    for (int b : z.zones[static_cast<std::size_t>(i)])
      renumber[b] = s.add_box(nd.boxes[static_cast<std::size_t>(b)].id, nd.boxes[static_cast<std::size_t>(b)].gen);
    auto local = [&](PortRef p) { return PortRef{renumber.at(p.box), p.kind, p.slot}; };
    for (const auto& w : nd.wires)
      if (zone_of[static_cast<std::size_t>(w.a.box)] == i && zone_of[static_cast<std::size_t>(w.b.box)] == i)
        s.connect(local(w.a), local(w.b));
    for (const auto& l : nd.legs)
      if (zone_of[static_cast<std::size_t>(l.port.box)] == i) s.add_leg(local(l.port), LegDir::Out);
    for (const auto& [ea, eb] : link_ends) {
      if (zone_of[static_cast<std::size_t>(ea.box)] == i) s.add_leg(local(ea), LegDir::Out);
      if (zone_of[static_cast<std::size_t>(eb.box)] == i) s.add_leg(local(eb), LegDir::Out);
    }
    z.standalone.push_back(std::move(s));
  }
  z.normalized = std::move(norm.d);
  return z;
}

Diagram internalize_normal_form(const Diagram& d) {
  ZoneDecomposition z = zone_decompose(d);
  if (z.internal_zones.empty()) return d;
  Diagram out = z.normalized;
  for (std::size_t k = 0; k < out.legs.size(); ++k) out.legs[k].dir = d.legs[k].dir;
  for (int i : z.internal_zones) {
    const auto& members = z.zones[static_cast<std::size_t>(i)];
    auto in_zone = [&](int box) { return std::find(members.begin(), members.end(), box) != members.end(); };
    auto it = std::find_if(out.wires.begin(), out.wires.end(), [&](const Wire& w) { return in_zone(w.a.box) || in_zone(w.b.box); });
    if (it == out.wires.end()) throw Error("internal zone without wires");
    const std::size_t k = static_cast<std::size_t>(it - out.wires.begin());
    const Wire w = out.wires[k];
    const int dl = out.add_box(out.fresh_id("nf_d"), GeneratorId::of(GenTag::Delta, d.theory));
    const int cap = out.add_box(out.fresh_id("nf_e"), GeneratorId::of(GenTag::Epsilon, d.theory));
    out.wires[k] = {w.a, {dl, PortKind::Dom, 0}};
    out.connect({dl, PortKind::Cod, 0}, w.b);
    out.connect({dl, PortKind::Cod, 1}, {cap, PortKind::Dom, 0});
  }
  return out;
}

}  // namespace spek
