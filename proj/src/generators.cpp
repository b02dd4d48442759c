#include "spek/generators.hpp"

#include <algorithm>
#include <numeric>

#include "spek/error.hpp"

namespace spek {

Permutation::Permutation(int base, std::vector<Digit> images) : base_(base), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != base_) throw Error("permutation has the wrong number of images");
  std::vector<Digit> sorted = images_;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < base_; ++k)
    if (sorted[static_cast<std::size_t>(k)] != k + digit_offset(base_)) throw Error("images do not form a bijection");
}

Permutation Permutation::identity(int base) {
  std::vector<Digit> images(static_cast<std::size_t>(base));
  std::iota(images.begin(), images.end(), digit_offset(base));
  return Permutation(base, std::move(images));
}

Permutation Permutation::parse(std::string_view cycles, int base) {
  const int offset = digit_offset(base);
  std::vector<Digit> images(static_cast<std::size_t>(base));
  std::iota(images.begin(), images.end(), offset);
  std::vector<bool> used(static_cast<std::size_t>(base), false);

  auto close_cycle = [&](const std::vector<Digit>& cycle) {
    for (std::size_t k = 0; k < cycle.size(); ++k)
      images[static_cast<std::size_t>(cycle[k] - offset)] = cycle[(k + 1) % cycle.size()];
  };

  std::vector<Digit> cycle;
  bool in_cycle = false;
  bool bare = cycles.find('(') == std::string_view::npos;
  if (bare) in_cycle = true;
  for (char c : cycles) {
    if (c == ' ') continue;
    if (c == '(') {
      if (in_cycle) throw Error("nested '(' in cycle notation");
      in_cycle = true;
      cycle.clear();
    } else if (c == ')') {
      if (!in_cycle) throw Error("unbalanced ')' in cycle notation");
      close_cycle(cycle);
      cycle.clear();
      in_cycle = false;
    } else if (c >= '0' && c <= '9') {
      if (!in_cycle) throw Error("digit outside a cycle");
      const Digit d = c - '0';
      if (d < offset || d >= offset + base) throw Error("digit '" + std::string(1, c) + "' outside the base");
      if (used[static_cast<std::size_t>(d - offset)]) throw Error("digit repeated in cycle notation");
      used[static_cast<std::size_t>(d - offset)] = true;
      cycle.push_back(d);
    } else {
      throw Error("unexpected character '" + std::string(1, c) + "' in cycle notation");
    }
  }
  if (bare) close_cycle(cycle);
  else if (in_cycle) throw Error("unterminated cycle");
  return Permutation(base, std::move(images));
}

bool Permutation::is_identity() const { return *this == identity(base_); }

Permutation Permutation::inverse() const {
  std::vector<Digit> inv(images_.size());
  const int offset = digit_offset(base_);
  for (std::size_t k = 0; k < images_.size(); ++k)
    inv[static_cast<std::size_t>(images_[k] - offset)] = static_cast<Digit>(k) + offset;
  return Permutation(base_, std::move(inv));
}

std::string Permutation::name() const {
  const int offset = digit_offset(base_);
  std::vector<bool> seen(images_.size(), false);
  std::string out;
  for (int start = 0; start < base_; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    out.push_back('(');
    Digit d = start + offset;
    do {
      seen[static_cast<std::size_t>(d - offset)] = true;
      out.push_back(static_cast<char>('0' + d));
      d = (*this)(d);
    } while (d != start + offset);
    out.push_back(')');
  }
  return out;
}

Relation Permutation::relation() const {
  std::vector<std::pair<Tuple, Tuple>> pairs;
  for (int k = 0; k < base_; ++k) pairs.push_back({{k + digit_offset(base_)}, {images_[static_cast<std::size_t>(k)]}});
  return Relation::from_pairs(base_, 1, 1, pairs);
}

Permutation operator*(const Permutation& after, const Permutation& before) {
  if (after.base_ != before.base_) throw TypeMismatch("product of permutations over different bases");
  std::vector<Digit> images(before.images_.size());
  for (std::size_t k = 0; k < images.size(); ++k) images[k] = after(before.images_[k]);
  return Permutation(after.base_, std::move(images));
}

const std::vector<Permutation>& s4() {
  static const std::vector<Permutation> all = [] {
    std::vector<Permutation> out;
    std::vector<Digit> images{1, 2, 3, 4};
    do out.emplace_back(kBaseIV, images);
    while (std::next_permutation(images.begin(), images.end()));
    return out;
  }();
  return all;
}

const Permutation& sigma_permutation() {
  static const Permutation sigma = Permutation::parse("(1)(3)(24)");
  return sigma;
}

Phase classify_permutation(const Permutation& p) {
  if (p.base() != kBaseIV) throw Error("phase classification applies to S4 only");
  const bool low = p(1) <= 2 && p(2) <= 2;
  return low ? Phase::Phased : Phase::Unphased;
}

namespace {

std::vector<Permutation> phased_subgroup() {
  std::vector<Permutation> out;
  for (const auto& p : s4())
    if (classify_permutation(p) == Phase::Phased) out.push_back(p);
  return out;
}

std::vector<std::string> names_of(const std::vector<Permutation>& word) {
  std::vector<std::string> names;
  for (const auto& p : word) names.push_back(p.name());
  return names;
}

bool better_word(const std::vector<Permutation>& a, const std::vector<Permutation>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return names_of(a) < names_of(b);
}

}  // namespace

std::vector<Permutation> sigma_decompose(const Permutation& p) {
  if (p.base() != kBaseIV) throw Error("sigma decomposition applies to S4 only");
  const auto phased = phased_subgroup();
  const Permutation id = Permutation::identity(kBaseIV);
  const Permutation& sigma = sigma_permutation();

  // Words with k Sigmas: [phi_0] S phi_1 S ... S [phi_k], inner factors non-identity.
  for (int k = 0;; ++k) {
    std::optional<std::vector<Permutation>> best;
    const int slots = k + 1;
    std::vector<int> choice(static_cast<std::size_t>(slots), 0);
    while (true) {
      bool valid = true;
      for (int s = 1; s < slots - 1; ++s)
        if (phased[static_cast<std::size_t>(choice[static_cast<std::size_t>(s)])].is_identity()) valid = false;
      if (valid) {
        std::vector<Permutation> word;
        Permutation product = id;
        for (int s = 0; s < slots; ++s) {
          const Permutation& phi = phased[static_cast<std::size_t>(choice[static_cast<std::size_t>(s)])];
          if (!phi.is_identity()) {
            word.push_back(phi);
            product = phi * product;
          }
          if (s + 1 < slots) {
            word.push_back(sigma);
            product = sigma * product;
          }
        }
        if (product == p && (!best || better_word(word, *best))) best = word;
      }
      int pos = 0;
      while (pos < slots && ++choice[static_cast<std::size_t>(pos)] == static_cast<int>(phased.size()))
        choice[static_cast<std::size_t>(pos++)] = 0;
      if (pos == slots) break;
    }
    if (best) return *best;
    if (k > 8) throw Error("sigma decomposition did not terminate");
  }
}

std::string theory_name(Theory t) {
  switch (t) {
    case Theory::Spek: return "spek";
    case Theory::MSpek: return "mspek";
    case Theory::HalfSpek: return "half";
  }
  return "?";
}

std::optional<Theory> parse_theory(std::string_view name) {
  if (name == "spek" || name == "Spek") return Theory::Spek;
  if (name == "mspek" || name == "MSpek") return Theory::MSpek;
  if (name == "half" || name == "halfspek" || name == "HalfSpek") return Theory::HalfSpek;
  return std::nullopt;
}

int GeneratorId::dom_arity() const {
  switch (tag) {
    case GenTag::Perm:
    case GenTag::Identity:
    case GenTag::Delta:
    case GenTag::Epsilon:
    case GenTag::BottomDagger: return 1;
    case GenTag::DeltaDagger:
    case GenTag::Swap: return 2;
    case GenTag::EpsilonDagger:
    case GenTag::Bottom: return 0;
  }
  return 0;
}

int GeneratorId::cod_arity() const {
  switch (tag) {
    case GenTag::Perm:
    case GenTag::Identity:
    case GenTag::DeltaDagger:
    case GenTag::EpsilonDagger:
    case GenTag::Bottom: return 1;
    case GenTag::Delta:
    case GenTag::Swap: return 2;
    case GenTag::Epsilon:
    case GenTag::BottomDagger: return 0;
  }
  return 0;
}

std::string GeneratorId::dsl_name() const {
  switch (tag) {
    case GenTag::Perm: return "perm(" + perm->name() + ")";
    case GenTag::Delta: return "delta";
    case GenTag::DeltaDagger: return "delta+";
    case GenTag::Epsilon: return "eps";
    case GenTag::EpsilonDagger: return "eps+";
    case GenTag::Bottom: return "bot";
    case GenTag::BottomDagger: return "bot+";
    case GenTag::Identity: return "id";
    case GenTag::Swap: return "swap";
  }
  return "?";
}

bool GeneratorId::is_phased() const {
  if (tag == GenTag::Bottom || tag == GenTag::BottomDagger) return false;
  if (tag == GenTag::Perm && theory != Theory::HalfSpek) return classify_permutation(*perm) == Phase::Phased;
  return true;
}

GeneratorId GeneratorId::dagger() const {
  GeneratorId g = *this;
  switch (tag) {
    case GenTag::Perm: g.perm = perm->inverse(); break;
    case GenTag::Delta: g.tag = GenTag::DeltaDagger; break;
    case GenTag::DeltaDagger: g.tag = GenTag::Delta; break;
    case GenTag::Epsilon: g.tag = GenTag::EpsilonDagger; break;
    case GenTag::EpsilonDagger: g.tag = GenTag::Epsilon; break;
    case GenTag::Bottom: g.tag = GenTag::BottomDagger; break;
    case GenTag::BottomDagger: g.tag = GenTag::Bottom; break;
    case GenTag::Identity:
    case GenTag::Swap: break;
  }
  return g;
}

std::optional<GeneratorId> parse_generator(std::string_view name, Theory theory) {
  static const std::pair<std::string_view, GenTag> table[] = {
      {"delta", GenTag::Delta},  {"delta+", GenTag::DeltaDagger}, {"eps", GenTag::Epsilon},
      {"eps+", GenTag::EpsilonDagger}, {"bot", GenTag::Bottom},     {"bot+", GenTag::BottomDagger},
      {"id", GenTag::Identity},  {"swap", GenTag::Swap},
  };
  for (const auto& [spelling, tag] : table)
    if (name == spelling) return GeneratorId::of(tag, theory);
  if (name.starts_with("perm(") && name.ends_with(")")) {
    std::string_view inner = name.substr(5, name.size() - 6);
    try {
      return GeneratorId::of_perm(Permutation::parse(inner, theory_base(theory)), theory);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

Relation delta_relation(Theory theory) {
  if (theory == Theory::HalfSpek) {
    return Relation::from_pairs(kBaseII, 1, 2,
                                std::vector<std::pair<Tuple, Tuple>>{
                                    {{0}, {0, 0}}, {{0}, {1, 1}}, {{1}, {0, 1}}, {{1}, {1, 0}}});
  }
  return Relation::from_pairs(kBaseIV, 1, 2,
                              std::vector<std::pair<Tuple, Tuple>>{{{1}, {1, 1}},
                                                                   {{1}, {2, 2}},
                                                                   {{2}, {1, 2}},
                                                                   {{2}, {2, 1}},
                                                                   {{3}, {3, 3}},
                                                                   {{3}, {4, 4}},
                                                                   {{4}, {3, 4}},
                                                                   {{4}, {4, 3}}});
}

Relation epsilon_relation(Theory theory) {
  if (theory == Theory::HalfSpek)
    return Relation::from_pairs(kBaseII, 1, 0, std::vector<std::pair<Tuple, Tuple>>{{{0}, {}}});
  return Relation::from_pairs(kBaseIV, 1, 0, std::vector<std::pair<Tuple, Tuple>>{{{1}, {}}, {{3}, {}}});
}

Relation bottom_relation() {
  return Relation::state(kBaseIV, 1, std::vector<Tuple>{{1}, {2}, {3}, {4}});
}

}  // namespace

Relation resolve(const GeneratorId& gen) {
  const int base = gen.base();
  switch (gen.tag) {
    case GenTag::Perm:
      if (!gen.perm || gen.perm->base() != base) throw TheoryViolation("permutation does not match the theory's base");
      return gen.perm->relation();
    case GenTag::Delta: return delta_relation(gen.theory);
    case GenTag::DeltaDagger: return converse(delta_relation(gen.theory));
    case GenTag::Epsilon: return epsilon_relation(gen.theory);
    case GenTag::EpsilonDagger: return converse(epsilon_relation(gen.theory));
    case GenTag::Bottom:
    case GenTag::BottomDagger:
      if (gen.theory != Theory::MSpek)
        throw TheoryViolation("bot is a generator of MSpek only (requested under " + theory_name(gen.theory) + ")");
      return gen.tag == GenTag::Bottom ? bottom_relation() : converse(bottom_relation());
    case GenTag::Identity: return identity(OnticSpace{base, 1});
    case GenTag::Swap: return swap(OnticSpace{base, 1}, OnticSpace{base, 1});
  }
  throw Error("unknown generator");
}

GeneratorId half_component(const GeneratorId& gen, Side side) {
  if (gen.theory == Theory::HalfSpek) throw NotParallel("generator is already a HalfSpek generator");
  if (!gen.is_phased()) throw NotParallel(gen.dsl_name() + " is not parallel over {1,2} | {3,4}");
  if (gen.tag != GenTag::Perm) return GeneratorId::of(gen.tag, Theory::HalfSpek);
  const Digit lo = side == Side::S12 ? 1 : 3;
  const Digit image0 = (*gen.perm)(lo) - lo;
  return GeneratorId::of_perm(Permutation(kBaseII, {image0, 1 - image0}), Theory::HalfSpek);
}

Relation relabel_half(const Relation& half, Side side) {
  if (half.base() != kBaseII && half.dom_arity() + half.cod_arity() > 0)
    throw TypeMismatch("relabel_half expects a HalfSpek relation");
  const Digit lo = side == Side::S12 ? 1 : 3;
  std::vector<std::pair<Tuple, Tuple>> pairs;
  for (auto [x, y] : half.pairs()) {
    for (auto& d : x) d += lo;
    for (auto& d : y) d += lo;
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return Relation::from_pairs(kBaseIV, half.dom_arity(), half.cod_arity(), pairs);
}

}  // namespace spek
