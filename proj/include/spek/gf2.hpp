#pragma once

#include <cstdint>
#include <vector>

namespace spek {

// Affine system A x = b over GF(2); rows are bit vectors over `vars` unknowns.
struct Gf2System {
  int vars = 0;
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint8_t> rhs;

  void add_row(std::vector<std::uint8_t> row, std::uint8_t value);
  int equations() const { return static_cast<int>(rows.size()); }
};

struct Gf2Solution {
  int rank = 0;
  bool consistent = true;
  // A particular solution with free variables set to 0 (empty if inconsistent).
  std::vector<std::uint8_t> particular;
  std::vector<int> pivot_columns;
};

// Gauss-Jordan elimination.
Gf2Solution gf2_solve(const Gf2System& system);

}  // namespace spek
