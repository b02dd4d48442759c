#pragma once

// Exhaustive generation of small connected state diagrams.
//
// Diagrams grow from one seed box: the first open port of the boxes touched
// so far becomes a leg, joins a later open port, or joins a fresh box. Fresh
// boxes of one type are interchangeable, and a box whose tensor is symmetric
// in its ports (delta, eps, involutions) is always entered through its first
// port. So every connected diagram is produced at least once, and isomorphic
// copies are mostly skipped. delta+ and eps are not listed separately: read
// as undirected tensors they coincide with delta and eps+.

#include <functional>
#include <string>
#include <vector>

#include "spek/diagram.hpp"

namespace spek::testing {

struct BoxKind {
  GeneratorId gen;
  bool symmetric = true;
};

struct SmallDiagramOptions {
  Theory theory = Theory::Spek;
  std::vector<BoxKind> kinds;
  int max_boxes = 4;
  int max_legs = 5;
  int min_legs = 1;
};

inline void for_each_small_diagram(const SmallDiagramOptions& o, const std::function<void(const Diagram&)>& visit) {
  Diagram d;
  d.theory = o.theory;
  std::vector<PortRef> open;  // unassigned ports, in touch order
  int legs = 0;

  std::function<void()> step;
  auto add_box = [&](const BoxKind& k) {
    const int b = d.add_box("b" + std::to_string(d.boxes.size()), k.gen);
    const auto ports = d.ports_of(b);
    open.insert(open.end(), ports.begin(), ports.end());
    return b;
  };
  auto drop_box = [&](int b) {
    d.boxes.pop_back();
    std::erase_if(open, [&](const PortRef& p) { return p.box == b; });
  };

  step = [&]() {
    if (open.empty()) {
      if (legs >= o.min_legs) visit(d);
      return;
    }
    const PortRef p = open.front();
    open.erase(open.begin());

    if (legs < o.max_legs) {
      d.add_leg(p, LegDir::Out);
      ++legs;
      step();
      --legs;
      d.legs.pop_back();
    }
    for (std::size_t k = 0; k < open.size(); ++k) {
      const PortRef q = open[k];
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
      d.connect(p, q);
      step();
      d.wires.pop_back();
      open.insert(open.begin() + static_cast<std::ptrdiff_t>(k), q);
    }
    if (static_cast<int>(d.boxes.size()) < o.max_boxes) {
      for (const auto& kind : o.kinds) {
        const int b = add_box(kind);
        const auto ports = d.ports_of(b);
        const std::size_t entries = kind.symmetric ? 1 : ports.size();
        for (std::size_t e = 0; e < entries; ++e) {
          std::erase_if(open, [&](const PortRef& r) { return r == ports[e]; });
          d.connect(p, ports[e]);
          step();
          d.wires.pop_back();
          // Put the port back where it was among the fresh box's ports.
          const auto at = open.end() - static_cast<std::ptrdiff_t>(ports.size() - 1 - e);
          open.insert(at, ports[e]);
        }
        drop_box(b);
      }
    }
    open.insert(open.begin(), p);
  };

  for (const auto& kind : o.kinds) {
    const int b = add_box(kind);
    step();
    drop_box(b);
  }
}

}  // namespace spek::testing
