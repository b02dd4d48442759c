#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spek/diagram.hpp"
#include "spek/gf2.hpp"
#include "spek/zones.hpp"

namespace spek {

// Bit conventions for parities and types. Every other file goes through these.
inline constexpr int kOdd = 0;
inline constexpr int kEven = 1;
inline constexpr int kType12 = 0;
inline constexpr int kType34 = 1;

// Parity of a HalfSpek state diagram: kEven iff the permutation boxes
// multiply to the identity, i.e. there is an even number of σ boxes.
// Throws Error for non-HalfSpek diagrams.
int halfspek_parity(const Diagram& d);

// The {1,2} and {3,4} shadows of a phased Spek diagram: each box replaced
// by its HalfSpek component. Throws NotParallel on unphased boxes.
Diagram half_shadow(const Diagram& d, Side side);

struct ZoneProfile {
  int zone = 0;
  int psi0 = kEven;  // parity of the zone's type-12 tuples, standalone
  int psi1 = kEven;  // parity of its type-34 tuples
  std::vector<int> adjacency;  // link endpoints, with multiplicity
  int leg_count = 0;
  bool internal = false;

  int psi(int type) const { return type == kType12 ? psi0 : psi1; }
};

std::vector<ZoneProfile> zone_profiles(const ZoneDecomposition& z);

// One affine row per internal zone i:
//   Ψ_i(T_i) + Σ_{j ∈ adj(i)} (T_i + T_j) = 1
// over the type bits of all zones. A block survives the cap on zone i iff
// zone i's parity is even, since eps keeps 1 and 3.
struct ConstraintSystem {
  Gf2System system;
  std::vector<int> row_zone;  // internal zone of each row
  Gf2Solution solved;

  int p() const { return system.equations(); }
  int rank() const { return solved.rank; }
  bool consistent() const { return solved.consistent; }
  // "T1 + T2 + T3 = 0" with 1-based zone numbers.
  std::string equation_text(int row) const;
};

ConstraintSystem build_constraints(const ZoneDecomposition& z, const std::vector<ZoneProfile>& profiles);

struct BlockSignature {
  std::vector<int> parity;  // per external zone, kOdd / kEven
  std::vector<int> type;    // per external zone, kType12 / kType34

  friend auto operator<=>(const BlockSignature& a, const BlockSignature& b) {
    if (auto c = a.type <=> b.type; c != 0) return c;
    return a.parity <=> b.parity;
  }
  friend bool operator==(const BlockSignature&, const BlockSignature&) = default;
};

// Closed form of a Spek state: a union of blocks. Legs are in zone order
// (ZoneDecomposition::leg_order).
struct StateForm {
  bool empty = false;
  std::vector<int> zone_ids;   // external zones, 0-based ids in the decomposition
  std::vector<int> zone_legs;  // leg count of each external zone
  std::vector<BlockSignature> blocks;  // sorted, distinct
  std::vector<std::string> constraints;
  std::uint64_t duplication = 1;  // augmented blocks mapping to each surviving block

  int legs() const;
  std::uint64_t tuples_per_block() const;
};

// Single-zone form of a connected phased state diagram, via its shadows.
StateForm phased_form(const Diagram& d);

StateForm external_form(const ZoneDecomposition& z, const std::vector<ZoneProfile>& profiles);
StateForm internal_form(const ZoneDecomposition& z, const std::vector<ZoneProfile>& profiles);

// zone_decompose, profiles and the matching theorem in one call.
StateForm closed_form(const Diagram& d);

struct DuplicationReport {
  int zones = 0;  // m, all zones
  int p = 0;      // constraints
  int rank = 0;   // p'
  std::uint64_t factor = 1;           // 2^(p - p')
  std::uint64_t distinct_blocks = 0;  // 2^(m - p)
  // Minimal nonempty subsets of internal zones (0-based) whose links to
  // external zones cover every external zone an even number of times.
  std::vector<std::vector<int>> acs;
};

// Requires a consistent system and at most 16 internal zones.
DuplicationReport duplication_analysis(const ConstraintSystem& cs, const ZoneDecomposition& z);

// Every tuple of every block, legs in zone order.
Relation expand(const StateForm& form);

// expand(), with legs put back into the diagram's declaration order.
Relation expand_in_diagram_order(const StateForm& form, const ZoneDecomposition& z);

// Text form:
//   FORM n=<legs> zones=<id>:<legs>,...   (1-based zone ids)
//   # constraint T1 + T2 = 1
//   (Odd,12; Even,34) x4
// with EMPTY in place of the blocks when no block survives. Blocks sorted by type bits, then parity bits.
std::string to_text(const StateForm& form);
StateForm parse_state_form(std::string_view text);

}  // namespace spek
