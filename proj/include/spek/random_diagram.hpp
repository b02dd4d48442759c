#pragma once

#include <cstdint>

#include "spek/diagram.hpp"

namespace spek {

struct RandomDiagramOptions {
  int max_boxes = 8;
  int max_legs = 5;
};

// A Spek state diagram grown by the inductive moves: start a zone with
// eps+, extend with delta / perm, merge two wires with delta+, close a loop,
// cap a wire with eps. Every permutation is drawn from all of S4, so Σ-links
// appear wherever an unphased permutation lands. Output legs only. The
// same seed always gives the same diagram.
Diagram random_spek_diagram(std::uint64_t seed, const RandomDiagramOptions& options = {});

}  // namespace spek
