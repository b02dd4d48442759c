#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spek/relation.hpp"

namespace spek {

// A bijection of IV = {1,2,3,4} (S4) or II = {0,1} (Z2).
class Permutation {
 public:
  // images[k] is the image of the k-th digit of the base.
  Permutation(int base, std::vector<Digit> images);

  static Permutation identity(int base);
  // Cycle notation; fixed points may be written or omitted, so "(12)",
  // "(12)(3)(4)" and "12" all parse to the same permutation. An empty string
  // or "()" is the identity.
  static Permutation parse(std::string_view cycles, int base = kBaseIV);

  int base() const { return base_; }
  Digit operator()(Digit d) const { return images_[static_cast<std::size_t>(d - digit_offset(base_))]; }
  const std::vector<Digit>& images() const { return images_; }
  bool is_identity() const;
  Permutation inverse() const;

  // Canonical cycle notation with fixed points, e.g. "(1)(3)(24)".
  std::string name() const;

  // The graph {(x, p(x))} as a relation base -> base.
  Relation relation() const;

  // (after * before)(x) = after(before(x)).
  friend Permutation operator*(const Permutation& after, const Permutation& before);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.images_ <=> b.images_; }

 private:
  int base_;
  std::vector<Digit> images_;
};

// All 24 permutations of IV in lexicographic order of their image lists.
const std::vector<Permutation>& s4();
// The unphased permutation (1)(3)(24) through which all unphased behaviour factors.
const Permutation& sigma_permutation();

enum class Phase { Phased, Unphased };

// Phased iff {1,2} and {3,4} are each mapped to themselves.
Phase classify_permutation(const Permutation& p);

// Factorises p into phased permutations separated by single Sigmas, in
// application order (the first element acts first). Identity phased factors
// are omitted. Among all such words the result has the fewest Sigmas, then
// the fewest factors, then the lexicographically smallest list of names.
std::vector<Permutation> sigma_decompose(const Permutation& p);

enum class Theory { Spek, MSpek, HalfSpek };

std::string theory_name(Theory t);
std::optional<Theory> parse_theory(std::string_view name);
inline int theory_base(Theory t) { return t == Theory::HalfSpek ? kBaseII : kBaseIV; }

enum class GenTag { Perm, Delta, DeltaDagger, Epsilon, EpsilonDagger, Bottom, BottomDagger, Identity, Swap };

struct GeneratorId {
  GenTag tag = GenTag::Identity;
  Theory theory = Theory::Spek;
  std::optional<Permutation> perm;  // set iff tag == Perm

  static GeneratorId of(GenTag tag, Theory theory) { return {tag, theory, std::nullopt}; }
  static GeneratorId of_perm(Permutation p, Theory theory) { return {GenTag::Perm, theory, std::move(p)}; }

  int base() const { return theory_base(theory); }
  int dom_arity() const;
  int cod_arity() const;
  // Diagram-language spelling: perm(<cycles>), delta, delta+, eps, eps+, bot, bot+, id, swap.
  std::string dsl_name() const;
  // Everything except unphased permutations and bot is phased.
  bool is_phased() const;
  // Daggered counterpart (perm -> inverse perm).
  GeneratorId dagger() const;

  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
};

// Parses a diagram-language generator name for the given theory. Returns
// nullopt for unknown names; theory legality is checked by resolve().
std::optional<GeneratorId> parse_generator(std::string_view name, Theory theory);

// The exact relation named by a generator. Throws TheoryViolation for bot
// outside MSpek.
Relation resolve(const GeneratorId& gen);

enum class Side { S12, S34 };

// The HalfSpek generator obtained by restricting a phased Spek generator to
// {1,2} (relabelled 1->0, 2->1) or {3,4} (3->0, 4->1). Throws NotParallel for
// unphased permutations and bot.
GeneratorId half_component(const GeneratorId& gen, Side side);

// Relabels a HalfSpek relation into Spek digits on the chosen side.
Relation relabel_half(const Relation& half, Side side);

}  // namespace spek
