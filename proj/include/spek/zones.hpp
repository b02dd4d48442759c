#pragma once

#include <vector>

#include "spek/diagram.hpp"

namespace spek {

// A Σ-link between two zones (possibly the same zone).
struct ZoneLink {
  int a;
  int b;
  int sigma_box;  // index of the Σ box in ZoneDecomposition::normalized
};

struct ZoneDecomposition {
  // The input diagram with every permutation rewritten as phased boxes
  // separated by Σ boxes, and an identity box wherever a Σ would otherwise
  // touch another Σ or an open leg.
  Diagram normalized;
  // zones[i] lists boxes of `normalized`; zone order follows the smallest
  // box index of the original diagram that each zone contains.
  std::vector<std::vector<int>> zones;
  std::vector<ZoneLink> links;
  std::vector<int> external_zones;
  std::vector<int> internal_zones;
  std::vector<int> leg_owner;  // zone of each open leg, declaration order
  // Legs ordered by zone, then by declaration: leg_order[k] is the
  // declaration index of the k-th leg in zone order.
  std::vector<int> leg_order;
  // Standalone phased diagram of each zone: its legs are the zone's own open
  // legs (declaration order) followed by one leg per Σ-link end, in link order.
  std::vector<Diagram> standalone;
  // Number of each zone's own open legs, which lead its standalone leg list.
  std::vector<int> own_legs;

  int zone_count() const { return static_cast<int>(zones.size()); }
  // Link endpoints at zone i, with multiplicity (self-links appear twice).
  std::vector<int> neighbours(int zone) const;
};

// Requires a Spek diagram. Legs are read as outputs.
ZoneDecomposition zone_decompose(const Diagram& d);

// For each internal zone, splices delta + eps onto one of its wires, so the
// zone reads as an external zone whose extra leg is capped. Evaluates to
// the same relation as d.
Diagram internalize_normal_form(const Diagram& d);

}  // namespace spek
