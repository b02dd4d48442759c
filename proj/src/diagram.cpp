#include "spek/diagram.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "spek/error.hpp"

namespace spek {

int Diagram::add_box(std::string id, GeneratorId gen) {
  boxes.push_back({std::move(id), std::move(gen)});
  return static_cast<int>(boxes.size()) - 1;
}

std::string Diagram::fresh_id(std::string_view prefix) const {
  std::set<std::string> taken;
  for (const auto& b : boxes) taken.insert(b.id);
  for (int n = static_cast<int>(boxes.size());; ++n) {
    std::string id = std::string(prefix) + std::to_string(n);
    if (!taken.count(id)) return id;
  }
}

int Diagram::in_arity() const {
  return static_cast<int>(std::count_if(legs.begin(), legs.end(), [](const OpenLeg& l) { return l.dir == LegDir::In; }));
}

int Diagram::out_arity() const { return static_cast<int>(legs.size()) - in_arity(); }

std::vector<PortRef> Diagram::ports_of(int box) const {
  const auto& gen = boxes[static_cast<std::size_t>(box)].gen;
  std::vector<PortRef> out;
  for (int s = 0; s < gen.dom_arity(); ++s) out.push_back({box, PortKind::Dom, s});
  for (int s = 0; s < gen.cod_arity(); ++s) out.push_back({box, PortKind::Cod, s});
  return out;
}

std::string Diagram::port_name(PortRef p) const {
  std::string name = p.box >= 0 && p.box < static_cast<int>(boxes.size()) ? boxes[static_cast<std::size_t>(p.box)].id
                                                                          : "#" + std::to_string(p.box);
  if (p.kind == PortKind::Dom) return name + ".in" + (p.slot == 0 ? "" : std::to_string(p.slot + 1));
  return name + "." + std::to_string(p.slot + 1);
}

void Diagram::validate() const {
  std::map<PortRef, int> uses;
  auto use = [&](PortRef p) {
    if (p.box < 0 || p.box >= static_cast<int>(boxes.size())) throw Error("port refers to a missing box");
    const auto& gen = boxes[static_cast<std::size_t>(p.box)].gen;
    const int limit = p.kind == PortKind::Dom ? gen.dom_arity() : gen.cod_arity();
    if (p.slot < 0 || p.slot >= limit) throw Error("box " + boxes[static_cast<std::size_t>(p.box)].id + " has no port " + port_name(p));
    if (++uses[p] > 1) throw Error("port " + port_name(p) + " is used twice");
  };
  for (const auto& w : wires) {
    use(w.a);
    use(w.b);
  }
  for (const auto& l : legs) use(l.port);
  for (int b = 0; b < static_cast<int>(boxes.size()); ++b) {
    const auto& gen = boxes[static_cast<std::size_t>(b)].gen;
    if (gen.theory != theory) throw TheoryViolation("box " + boxes[static_cast<std::size_t>(b)].id + " belongs to another theory");
    for (PortRef p : ports_of(b))
      if (!uses.count(p)) throw Error("port " + port_name(p) + " is not connected");
  }
}

std::string to_dsl(const Diagram& d) {
  std::ostringstream out;
  out << "theory " << theory_name(d.theory) << "\n";
  for (const auto& b : d.boxes) out << "box " << b.id << ": " << b.gen.dsl_name() << "\n";
  for (const auto& w : d.wires) out << "wire " << d.port_name(w.a) << " " << d.port_name(w.b) << "\n";
  // One statement per leg keeps the declaration order of mixed in/out legs.
  for (const auto& l : d.legs) out << (l.dir == LegDir::In ? "in " : "out ") << d.port_name(l.port) << "\n";
  return out.str();
}

Diagram bend_leg(const Diagram& d, int leg) {
  if (leg < 0 || leg >= static_cast<int>(d.legs.size()))
    throw IndexOutOfRange("bend_leg: leg " + std::to_string(leg) + " out of range");
  Diagram out = d;
  const OpenLeg bent = d.legs[static_cast<std::size_t>(leg)];
  out.legs.erase(out.legs.begin() + leg);

  // eta = delta . eps+ is the cup; its converse eps . delta+ is the cap.
  if (bent.dir == LegDir::In) {
    const int e = out.add_box(out.fresh_id("cup_e"), GeneratorId::of(GenTag::EpsilonDagger, d.theory));
    const int m = out.add_box(out.fresh_id("cup_d"), GeneratorId::of(GenTag::Delta, d.theory));
    out.connect({e, PortKind::Cod, 0}, {m, PortKind::Dom, 0});
    out.connect({m, PortKind::Cod, 1}, bent.port);
    out.legs.insert(out.legs.begin(), OpenLeg{{m, PortKind::Cod, 0}, LegDir::Out});
  } else {
    const int m = out.add_box(out.fresh_id("cap_d"), GeneratorId::of(GenTag::DeltaDagger, d.theory));
    const int e = out.add_box(out.fresh_id("cap_e"), GeneratorId::of(GenTag::Epsilon, d.theory));
    out.connect({m, PortKind::Cod, 0}, {e, PortKind::Dom, 0});
    out.connect(bent.port, {m, PortKind::Dom, 1});
    out.legs.push_back(OpenLeg{{m, PortKind::Dom, 0}, LegDir::In});
  }
  return out;
}

Diagram as_state_diagram(const Diagram& d) {
  Diagram out = d;
  for (auto& l : out.legs) l.dir = LegDir::Out;
  return out;
}

}  // namespace spek
