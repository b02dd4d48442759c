#pragma once

#include <cstdint>

namespace spek {

// Upper bound on the number of cells (dom size x cod size, or base^vars for
// an intermediate tensor) any single value may occupy. Defaults to 4^10,
// which covers IV^5 -> IV^5; the SPEK_MAX_CELLS environment variable
// overrides the default at first use.
std::uint64_t max_cells();

void set_max_cells(std::uint64_t cells);

// Throws CapacityExceeded when `cells` is above the ceiling.
void require_cells(std::uint64_t cells, const char* what);

class ScopedMaxCells {
 public:
  explicit ScopedMaxCells(std::uint64_t cells) : saved_(max_cells()) { set_max_cells(cells); }
  ~ScopedMaxCells() { set_max_cells(saved_); }
  ScopedMaxCells(const ScopedMaxCells&) = delete;
  ScopedMaxCells& operator=(const ScopedMaxCells&) = delete;

 private:
  std::uint64_t saved_;
};

}  // namespace spek
