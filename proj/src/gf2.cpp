#include "spek/gf2.hpp"

#include <utility>

#include "spek/error.hpp"

namespace spek {

void Gf2System::add_row(std::vector<std::uint8_t> row, std::uint8_t value) {
  if (static_cast<int>(row.size()) != vars) throw Error("gf2 row has the wrong width");
  rows.push_back(std::move(row));
  rhs.push_back(value & 1U);
}

Gf2Solution gf2_solve(const Gf2System& system) {
  auto rows = system.rows;
  auto rhs = system.rhs;
  Gf2Solution out;
  int r = 0;
  for (int c = 0; c < system.vars && r < static_cast<int>(rows.size()); ++c) {
    int pivot = -1;
    for (int k = r; k < static_cast<int>(rows.size()); ++k)
      if (rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]) {
        pivot = k;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<std::size_t>(r)], rows[static_cast<std::size_t>(pivot)]);
    std::swap(rhs[static_cast<std::size_t>(r)], rhs[static_cast<std::size_t>(pivot)]);
    for (int k = 0; k < static_cast<int>(rows.size()); ++k) {
      if (k == r || !rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]) continue;
      for (int j = 0; j < system.vars; ++j)
        rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] ^= rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
      rhs[static_cast<std::size_t>(k)] ^= rhs[static_cast<std::size_t>(r)];
    }
    out.pivot_columns.push_back(c);
    ++r;
  }
  out.rank = r;
  for (std::size_t k = static_cast<std::size_t>(r); k < rows.size(); ++k)
    if (rhs[k]) out.consistent = false;
  if (out.consistent) {
    out.particular.assign(static_cast<std::size_t>(system.vars), 0);
    for (int k = 0; k < r; ++k)
      out.particular[static_cast<std::size_t>(out.pivot_columns[static_cast<std::size_t>(k)])] = rhs[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace spek
