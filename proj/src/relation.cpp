#include "spek/relation.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "spek/capacity.hpp"
#include "spek/error.hpp"
#include "spek/kernels.hpp"

namespace spek {

std::uint64_t ipow(std::uint64_t base, int exponent) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (result > std::numeric_limits<std::uint64_t>::max() / base)
      throw CapacityExceeded("object size overflows 64 bits");
    result *= base;
  }
  return result;
}

std::string OnticSpace::name() const { return std::to_string(base) + "^" + std::to_string(arity); }

std::uint64_t tuple_index(std::span<const Digit> digits, int base) {
  const int offset = digit_offset(base);
  std::uint64_t index = 0;
  for (Digit d : digits) {
    if (d < offset || d >= offset + base)
      throw IndexOutOfRange("digit " + std::to_string(d) + " outside base " + std::to_string(base));
    index = index * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d - offset);
  }
  return index;
}

Tuple tuple_at(std::uint64_t index, int base, int arity) {
  Tuple t(static_cast<std::size_t>(arity));
  const int offset = digit_offset(base);
  for (int i = arity - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<Digit>(index % static_cast<std::uint64_t>(base)) + offset;
    index /= static_cast<std::uint64_t>(base);
  }
  return t;
}

Relation::Relation(int base, int dom_arity, int cod_arity)
    : base_(base), dom_arity_(dom_arity), cod_arity_(cod_arity) {
  if (base != kBaseIV && base != kBaseII) throw Error("unsupported base " + std::to_string(base));
  if (dom_arity < 0 || cod_arity < 0) throw Error("negative arity");
  dom_size_ = ipow(static_cast<std::uint64_t>(base), dom_arity);
  cod_size_ = ipow(static_cast<std::uint64_t>(base), cod_arity);
  if (dom_size_ > max_cells() || cod_size_ > max_cells() || dom_size_ * cod_size_ > max_cells())
    require_cells(std::max({dom_size_, cod_size_, dom_size_ * cod_size_}), "relation");
  words_per_row_ = static_cast<std::size_t>((cod_size_ + 63) / 64);
  bits_.assign(static_cast<std::size_t>(dom_size_) * words_per_row_, 0);
}

Relation Relation::from_pairs(int base, int dom_arity, int cod_arity,
                              std::span<const std::pair<Tuple, Tuple>> pairs) {
  Relation r(base, dom_arity, cod_arity);
  for (const auto& [x, y] : pairs) {
    if (static_cast<int>(x.size()) != dom_arity || static_cast<int>(y.size()) != cod_arity)
      throw TypeMismatch("pair arity does not match relation type " + r.dom().name() + " -> " + r.cod().name());
    r.set(tuple_index(x, base), tuple_index(y, base));
  }
  return r;
}

Relation Relation::state(int base, int arity, std::span<const Tuple> tuples) {
  Relation r(base, 0, arity);
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != arity) throw TypeMismatch("tuple arity does not match state arity");
    r.set(0, tuple_index(t, base));
  }
  return r;
}

Relation Relation::from_words(int base, int dom_arity, int cod_arity, std::vector<std::uint64_t> words) {
  Relation r(base, dom_arity, cod_arity);
  if (words.size() != r.bits_.size()) throw Error("word buffer has the wrong size");
  r.bits_ = std::move(words);
  return r;
}

bool Relation::contains(std::span<const Digit> x, std::span<const Digit> y) const {
  return contains(tuple_index(x, base_), tuple_index(y, base_));
}

std::uint64_t Relation::count() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : bits_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

bool Relation::empty() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<std::pair<Tuple, Tuple>> Relation::pairs() const {
  std::vector<std::pair<Tuple, Tuple>> out;
  for (std::uint64_t r = 0; r < dom_size_; ++r)
    for (std::uint64_t c = 0; c < cod_size_; ++c)
      if (contains(r, c)) out.emplace_back(tuple_at(r, base_, dom_arity_), tuple_at(c, base_, cod_arity_));
  return out;
}

std::vector<Tuple> Relation::tuples() const {
  std::vector<Tuple> out;
  for (std::uint64_t r = 0; r < dom_size_; ++r)
    for (std::uint64_t c = 0; c < cod_size_; ++c)
      if (contains(r, c)) out.push_back(tuple_at(c, base_, cod_arity_));
  return out;
}

std::string Relation::key() const {
  std::string k;
  k.reserve(3 + bits_.size() * 8);
  k.push_back(static_cast<char>(dom_arity_));
  k.push_back(static_cast<char>(cod_arity_));
  k.push_back(static_cast<char>(dom_arity_ + cod_arity_ == 0 ? 0 : base_));
  for (std::uint64_t w : bits_)
    for (int b = 0; b < 8; ++b) k.push_back(static_cast<char>((w >> (8 * b)) & 0xFF));
  return k;
}

bool operator==(const Relation& a, const Relation& b) {
  return a.dom() == b.dom() && a.cod() == b.cod() && a.bits_ == b.bits_;
}

bool canonical_less(const Relation& a, const Relation& b) {
  const int ta = a.dom_arity() + a.cod_arity();
  const int tb = b.dom_arity() + b.cod_arity();
  if (ta != tb) return ta < tb;
  return a.key() < b.key();
}

std::size_t RelationHash::operator()(const Relation& r) const { return std::hash<std::string>{}(r.key()); }

namespace {

// Base shared by two values, where a scalar-typed side adopts the other.
int common_base(const Relation& a, const Relation& b) {
  const bool a_scalar = a.dom_arity() + a.cod_arity() == 0;
  const bool b_scalar = b.dom_arity() + b.cod_arity() == 0;
  if (a_scalar) return b.base();
  if (b_scalar || a.base() == b.base()) return a.base();
  throw TypeMismatch("cannot combine base " + std::to_string(a.base()) + " with base " + std::to_string(b.base()));
}

}  // namespace

Relation compose(const Relation& first, const Relation& second) {
  if (!(first.cod() == second.dom()))
    throw TypeMismatch("compose: codomain " + first.cod().name() + " does not match domain " + second.dom().name());
  return kernels::compose_parallel(first, second);
}

Relation tensor(const Relation& left, const Relation& right) {
  common_base(left, right);
  return kernels::tensor_parallel(left, right);
}

Relation converse(const Relation& rel) {
  return Relation::from_predicate(rel.base(), rel.cod_arity(), rel.dom_arity(),
                                  [&](std::uint64_t r, std::uint64_t c) { return rel.contains(c, r); });
}

Relation identity(OnticSpace space) {
  return Relation::from_predicate(space.base, space.arity, space.arity,
                                  [](std::uint64_t r, std::uint64_t c) { return r == c; });
}

Relation swap(OnticSpace a, OnticSpace b) {
  int base = a.base;
  if (a.is_unit()) base = b.base;
  else if (!b.is_unit() && a.base != b.base) throw TypeMismatch("swap of mixed bases");
  const std::uint64_t size_b = ipow(static_cast<std::uint64_t>(base), b.arity);
  const std::uint64_t size_a = ipow(static_cast<std::uint64_t>(base), a.arity);
  return Relation::from_predicate(base, a.arity + b.arity, a.arity + b.arity,
                                  [&](std::uint64_t r, std::uint64_t c) {
                                    const std::uint64_t x = r / size_b, y = r % size_b;
                                    return c == y * size_a + x;
                                  });
}

Relation marginal(const Relation& state, const std::set<int>& keep) {
  if (!state.is_state()) throw TypeMismatch("marginal expects a state I -> base^n");
  for (int leg : keep)
    if (leg < 0 || leg >= state.cod_arity())
      throw IndexOutOfRange("marginal: leg " + std::to_string(leg) + " out of range for arity " +
                            std::to_string(state.cod_arity()));
  std::vector<Tuple> kept;
  for (const Tuple& t : state.tuples()) {
    Tuple k;
    for (int leg : keep) k.push_back(t[static_cast<std::size_t>(leg)]);
    kept.push_back(std::move(k));
  }
  return Relation::state(state.base(), static_cast<int>(keep.size()), kept);
}

Relation permute_legs(const Relation& state, std::span<const int> order) {
  if (!state.is_state()) throw TypeMismatch("permute_legs expects a state");
  if (static_cast<int>(order.size()) != state.cod_arity()) throw IndexOutOfRange("permute_legs: order has wrong length");
  std::vector<bool> seen(order.size(), false);
  for (int leg : order) {
    if (leg < 0 || leg >= state.cod_arity() || seen[static_cast<std::size_t>(leg)])
      throw IndexOutOfRange("permute_legs: order is not a permutation");
    seen[static_cast<std::size_t>(leg)] = true;
  }
  std::vector<Tuple> out;
  for (const Tuple& t : state.tuples()) {
    Tuple p;
    for (int leg : order) p.push_back(t[static_cast<std::size_t>(leg)]);
    out.push_back(std::move(p));
  }
  return Relation::state(state.base(), state.cod_arity(), out);
}

Relation as_state(const Relation& rel) {
  std::vector<Tuple> out;
  for (auto& [x, y] : rel.pairs()) {
    Tuple t = x;
    t.insert(t.end(), y.begin(), y.end());
    out.push_back(std::move(t));
  }
  return Relation::state(rel.base(), rel.dom_arity() + rel.cod_arity(), out);
}

Relation as_map(const Relation& state, int dom_arity) {
  if (!state.is_state()) throw TypeMismatch("as_map expects a state");
  if (dom_arity < 0 || dom_arity > state.cod_arity()) throw IndexOutOfRange("as_map: domain arity out of range");
  std::vector<std::pair<Tuple, Tuple>> out;
  for (const Tuple& t : state.tuples())
    out.emplace_back(Tuple(t.begin(), t.begin() + dom_arity), Tuple(t.begin() + dom_arity, t.end()));
  return Relation::from_pairs(state.base(), dom_arity, state.cod_arity() - dom_arity, out);
}

namespace {

std::string digits_text(const Tuple& t) {
  if (t.empty()) return "*";
  std::string s;
  for (Digit d : t) s.push_back(static_cast<char>('0' + d));
  return s;
}

constexpr std::string_view kEmptyMark = "\xE2\x88\x85";  // U+2205

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

Tuple parse_digits(std::string_view s, int line) {
  s = trim(s);
  Tuple t;
  if (s == "*") return t;
  for (char c : s) {
    if (c == ' ') continue;
    if (c < '0' || c > '9') throw ParseError(line, 1, "bad digit '" + std::string(1, c) + "'");
    t.push_back(c - '0');
  }
  return t;
}

}  // namespace

Relation cup(OnticSpace a) {
  const std::uint64_t size = a.size();
  return Relation::from_predicate(a.base, 0, 2 * a.arity,
                                  [&](std::uint64_t, std::uint64_t c) { return c / size == c % size; });
}

Relation bend_to_state(const Relation& rel) {
  const OnticSpace a = rel.dom();
  return compose(cup(a), tensor(identity(a), rel));
}

Relation bend_to_map(const Relation& state, int dom_arity) {
  if (!state.is_state()) throw TypeMismatch("bend_to_map expects a state");
  if (dom_arity < 0 || dom_arity > state.cod_arity()) throw IndexOutOfRange("bend_to_map: domain arity out of range");
  const OnticSpace a{state.base(), dom_arity};
  const OnticSpace b{state.base(), state.cod_arity() - dom_arity};
  return compose(tensor(identity(a), state), tensor(converse(cup(a)), identity(b)));
}

Relation leg_permutation(int base, std::span<const int> order) {
  const int n = static_cast<int>(order.size());
  std::vector<int> current(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) current[static_cast<std::size_t>(k)] = k;
  Relation result = identity({base, n});
  // Bubble each wanted factor into place; every step is one adjacent swap.
  for (int k = 0; k < n; ++k) {
    int pos = static_cast<int>(std::find(current.begin(), current.end(), order[static_cast<std::size_t>(k)]) - current.begin());
    if (pos == n) throw IndexOutOfRange("leg_permutation: order is not a permutation");
    while (pos > k) {
      const Relation step = tensor(tensor(identity({base, pos - 1}), swap({base, 1}, {base, 1})), identity({base, n - pos - 1}));
      result = compose(result, step);
      std::swap(current[static_cast<std::size_t>(pos)], current[static_cast<std::size_t>(pos - 1)]);
      --pos;
    }
  }
  return result;
}

Relation contract_legs(const Relation& state, int p, int q) {
  if (!state.is_state()) throw TypeMismatch("contract_legs expects a state");
  const int n = state.cod_arity();
  if (p == q || p < 0 || q < 0 || p >= n || q >= n) throw IndexOutOfRange("contract_legs: bad leg pair");
  std::vector<int> order;
  for (int k = 0; k < n; ++k)
    if (k != p && k != q) order.push_back(k);
  order.push_back(p);
  order.push_back(q);
  const int base = state.base();
  const Relation moved = compose(state, leg_permutation(base, order));
  return compose(moved, tensor(identity({base, n - 2}), converse(cup({base, 1}))));
}

std::string to_text(const Relation& rel) {
  std::ostringstream out;
  out << "REL " << rel.base() << '^' << rel.dom_arity() << " -> " << rel.base() << '^' << rel.cod_arity() << '\n';
  if (rel.empty()) {
    out << kEmptyMark << '\n';
    return out.str();
  }
  for (const auto& [x, y] : rel.pairs()) {
    if (!rel.is_state()) out << digits_text(x) << " ~ ";
    out << digits_text(y) << '\n';
  }
  return out.str();
}

Relation parse_relation(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  int base = 0, m = 0, n = 0;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    std::string_view l = trim(lines[i]);
    if (l.empty() || l.front() == '#') continue;
    int b2 = 0;
    char arrow[3] = {};
    std::string header(l);
    if (std::sscanf(header.c_str(), "REL %d^%d %2s %d^%d", &base, &m, arrow, &b2, &n) != 5 ||
        std::string_view(arrow) != "->" || base != b2)
      throw ParseError(static_cast<int>(i) + 1, 1, "expected 'REL <base>^<m> -> <base>^<n>'");
    ++i;
    break;
  }
  if (base == 0) throw ParseError(1, 1, "missing REL header");
  std::vector<std::pair<Tuple, Tuple>> pairs;
  bool saw_empty = false;
  for (; i < lines.size(); ++i) {
    std::string_view l = trim(lines[i]);
    if (l.empty() || l.front() == '#') continue;
    if (l == kEmptyMark) {
      saw_empty = true;
      continue;
    }
    if (l.starts_with("REL ")) break;
    const int line_no = static_cast<int>(i) + 1;
    const std::size_t tilde = l.find('~');
    Tuple x, y;
    if (tilde == std::string_view::npos) {
      if (m != 0) throw ParseError(line_no, 1, "map lines need 'x ~ y'");
      y = parse_digits(l, line_no);
    } else {
      x = parse_digits(l.substr(0, tilde), line_no);
      y = parse_digits(l.substr(tilde + 1), line_no);
    }
    if (static_cast<int>(x.size()) != m || static_cast<int>(y.size()) != n)
      throw ParseError(line_no, 1, "tuple arity does not match header");
    pairs.emplace_back(std::move(x), std::move(y));
  }
  if (saw_empty && !pairs.empty()) throw ParseError(1, 1, "empty-relation mark mixed with pairs");
  try {
    return Relation::from_pairs(base, m, n, pairs);
  } catch (const IndexOutOfRange& e) {
    throw ParseError(1, 1, e.what());
  }
}

}  // namespace spek
