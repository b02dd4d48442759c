#include "spek/capacity.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "spek/error.hpp"

namespace spek {
namespace {

constexpr std::uint64_t kDefaultMaxCells = std::uint64_t{1} << 20;

std::uint64_t initial_max_cells() {
  if (const char* env = std::getenv("SPEK_MAX_CELLS")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return kDefaultMaxCells;
}

std::atomic<std::uint64_t>& ceiling() {
  static std::atomic<std::uint64_t> value{initial_max_cells()};
  return value;
}

}  // namespace

std::uint64_t max_cells() { return ceiling().load(std::memory_order_relaxed); }

void set_max_cells(std::uint64_t cells) { ceiling().store(cells, std::memory_order_relaxed); }

void require_cells(std::uint64_t cells, const char* what) {
  if (cells > max_cells()) {
    throw CapacityExceeded(std::string(what) + " needs " + std::to_string(cells) +
                           " cells; ceiling is " + std::to_string(max_cells()) +
                           " (set SPEK_MAX_CELLS to raise it)");
  }
}

}  // namespace spek
