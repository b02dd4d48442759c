#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spek/relation.hpp"

// Data-parallel kernels behind the relation algebra and the diagram
// evaluator. Each kernel has an OpenMP version used by the library and a
// plain serial version kept as a reference for tests and benchmarks. The
// serial versions use a different traversal (pair enumeration rather than
// word-level sweeps) so the two can check each other.
namespace spek::kernels {

Relation compose_serial(const Relation& first, const Relation& second);
Relation compose_parallel(const Relation& first, const Relation& second);

Relation tensor_serial(const Relation& left, const Relation& right);
Relation tensor_parallel(const Relation& left, const Relation& right);

// A boolean tensor over named variables, each ranging over `base` values.
// The first variable is the most significant index digit.
struct BoolTensor {
  int base = kBaseIV;
  std::vector<int> vars;
  std::vector<std::uint8_t> cells;

  std::uint64_t size() const { return cells.size(); }
  bool any() const;
};

BoolTensor make_tensor(int base, std::vector<int> vars);

// Joins two tensors on their shared variables and existentially projects
// onto `keep` (in that order). Every kept variable must occur in `a` or `b`.
BoolTensor join_serial(const BoolTensor& a, const BoolTensor& b, std::span<const int> keep);
BoolTensor join_parallel(const BoolTensor& a, const BoolTensor& b, std::span<const int> keep);

// Existential projection / reordering of a single tensor.
BoolTensor project(const BoolTensor& a, std::span<const int> keep);

}  // namespace spek::kernels
