#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spek {

inline constexpr int kBaseIV = 4;
inline constexpr int kBaseII = 2;

using Digit = int;
using Tuple = std::vector<Digit>;

// Smallest digit of a base: IV = {1,2,3,4}, II = {0,1}.
constexpr int digit_offset(int base) { return base == kBaseIV ? 1 : 0; }

std::uint64_t ipow(std::uint64_t base, int exponent);

// The object base^arity. I is arity 0 of either base; the two encodings of I
// compare equal.
struct OnticSpace {
  int base = kBaseIV;
  int arity = 0;

  static OnticSpace unit(int base = kBaseIV) { return {base, 0}; }
  static OnticSpace iv(int arity) { return {kBaseIV, arity}; }
  static OnticSpace ii(int arity) { return {kBaseII, arity}; }

  bool is_unit() const { return arity == 0; }
  std::uint64_t size() const { return ipow(static_cast<std::uint64_t>(base), arity); }
  std::string name() const;

  friend bool operator==(const OnticSpace& a, const OnticSpace& b) {
    return a.arity == b.arity && (a.arity == 0 || a.base == b.base);
  }
};

// Index of a tuple in canonical order (leftmost digit most significant).
std::uint64_t tuple_index(std::span<const Digit> digits, int base);
Tuple tuple_at(std::uint64_t index, int base, int arity);

// An exact relation base^m -> base^n stored as a dense bit matrix, rows
// indexed by domain tuples and columns by codomain tuples. Values are
// immutable once constructed.
class Relation {
 public:
  // The empty scalar I -> I.
  Relation() : Relation(kBaseIV, 0, 0) {}
  // The empty relation base^m -> base^n.
  Relation(int base, int dom_arity, int cod_arity);

  static Relation from_pairs(int base, int dom_arity, int cod_arity,
                             std::span<const std::pair<Tuple, Tuple>> pairs);
  // A state I -> base^arity given by its tuples.
  static Relation state(int base, int arity, std::span<const Tuple> tuples);
  // Takes ownership of a row-major word buffer laid out as words_per_row()
  // words per domain element. Padding bits must be zero.
  static Relation from_words(int base, int dom_arity, int cod_arity, std::vector<std::uint64_t> words);

  template <class Pred>
  static Relation from_predicate(int base, int dom_arity, int cod_arity, Pred&& related) {
    Relation r(base, dom_arity, cod_arity);
    for (std::uint64_t row = 0; row < r.dom_size_; ++row)
      for (std::uint64_t col = 0; col < r.cod_size_; ++col)
        if (related(row, col)) r.set(row, col);
    return r;
  }

  int base() const { return base_; }
  int dom_arity() const { return dom_arity_; }
  int cod_arity() const { return cod_arity_; }
  OnticSpace dom() const { return {base_, dom_arity_}; }
  OnticSpace cod() const { return {base_, cod_arity_}; }
  std::uint64_t dom_size() const { return dom_size_; }
  std::uint64_t cod_size() const { return cod_size_; }
  std::size_t words_per_row() const { return words_per_row_; }
  bool is_state() const { return dom_arity_ == 0; }

  bool contains(std::uint64_t row, std::uint64_t col) const {
    return (bits_[row * words_per_row_ + col / 64] >> (col % 64)) & 1U;
  }
  bool contains(std::span<const Digit> x, std::span<const Digit> y) const;
  std::span<const std::uint64_t> row(std::uint64_t r) const {
    return {bits_.data() + r * words_per_row_, words_per_row_};
  }
  std::span<const std::uint64_t> words() const { return bits_; }

  std::uint64_t count() const;
  bool empty() const;

  // Pairs / tuples in canonical order.
  std::vector<std::pair<Tuple, Tuple>> pairs() const;
  std::vector<Tuple> tuples() const;  // codomain tuples of a state

  // Canonical byte string: arities, then the bit matrix packed LSB-first.
  std::string key() const;

  friend bool operator==(const Relation& a, const Relation& b);

 private:
  void set(std::uint64_t row, std::uint64_t col) {
    bits_[row * words_per_row_ + col / 64] |= std::uint64_t{1} << (col % 64);
  }

  int base_;
  int dom_arity_;
  int cod_arity_;
  std::uint64_t dom_size_;
  std::uint64_t cod_size_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> bits_;
};

// Ordering used for deterministic work queues: total arity, then key().
bool canonical_less(const Relation& a, const Relation& b);

struct RelationHash {
  std::size_t operator()(const Relation& r) const;
};

// {(a,c) | exists b: (a,b) in first and (b,c) in second}.
Relation compose(const Relation& first, const Relation& second);
Relation tensor(const Relation& left, const Relation& right);
Relation converse(const Relation& rel);
Relation identity(OnticSpace space);
// sigma_{A,B}: A x B -> B x A.
Relation swap(OnticSpace a, OnticSpace b);

// Digit deletion: the state on the kept legs (0-based, any order; the result
// lists kept legs in increasing order).
Relation marginal(const Relation& state, const std::set<int>& keep);

// New state whose leg k is leg order[k] of the input.
Relation permute_legs(const Relation& state, std::span<const int> order);

// Index-level map-state reshapes: (x, y) <-> x++y. These are the identity on
// the underlying set of pairs; the categorical versions (via the cup) live in
// the verification module.
Relation as_state(const Relation& rel);
Relation as_map(const Relation& state, int dom_arity);

// Categorical reshapes built from compose, tensor, swap and the compact
// structure eta_A = {(x, x)} (the cup of delta . eps+).
Relation cup(OnticSpace a);
// Relation A^m -> A^n to the state A^m (x) A^n.
Relation bend_to_state(const Relation& rel);
// State A^m (x) A^n to the relation A^m -> A^n.
Relation bend_to_map(const Relation& state, int dom_arity);
// The map base^n -> base^n moving factor order[k] to position k, as a
// composite of adjacent swaps.
Relation leg_permutation(int base, std::span<const int> order);
// Joins legs p and q of a state through the cap; remaining legs keep their order.
Relation contract_legs(const Relation& state, int p, int q);

// Canonical text form:
//   REL <base>^<m> -> <base>^<n>
//   x1..xm ~ y1..yn      (one line per pair; states omit "x ~ ")
// `*` is the empty tuple, `∅` marks the empty relation.
std::string to_text(const Relation& rel);
Relation parse_relation(std::string_view text);

}  // namespace spek
