#include "spek/closure.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>
#include <unordered_set>

#include "spek/error.hpp"

namespace spek {

namespace {

constexpr int kMaxClosureArity = 4;

// A state of arity <= 4 as a 256-bit set of tuple indices.
struct Packed {
  int arity = 0;
  std::array<std::uint64_t, 4> bits{};

  bool test(unsigned idx) const { return (bits[idx / 64] >> (idx % 64)) & 1U; }
  void set(unsigned idx) { bits[idx / 64] |= std::uint64_t{1} << (idx % 64); }
  friend bool operator==(const Packed&, const Packed&) = default;
};

struct PackedHash {
  std::size_t operator()(const Packed& p) const {
    std::size_t h = static_cast<std::size_t>(p.arity);
    for (std::uint64_t w : p.bits) h = h * 0x9E3779B97F4A7C15ULL ^ (w + 0x7F4A7C15ULL + (h << 6) + (h >> 2));
    return h;
  }
};

class Enumerator {
 public:
  explicit Enumerator(const ClosureOptions& options) : options_(options), base_(theory_base(options.theory)) {
    if (options.arity_bound < 1 || options.arity_bound > kMaxClosureArity)
      throw CapacityExceeded("closure arity bound must be between 1 and " + std::to_string(kMaxClosureArity));
    pow_[0] = 1;
    for (int k = 1; k <= 2 * kMaxClosureArity; ++k) pow_[k] = pow_[k - 1] * static_cast<unsigned>(base_);
  }

  ClosureReport run() {
    ClosureReport report;
    report.theory = options_.theory;
    report.arity_bound = options_.arity_bound;

    std::vector<Candidate> seeds;
    for (auto& [name, rel] : generator_states(options_.theory)) {
      if (rel.cod_arity() > options_.arity_bound) continue;
      Witness w;
      w.gen = name;
      seeds.push_back({pack(rel), w});
    }
    commit(seeds, report);

    std::size_t frontier = 0;
    while (frontier < states_.size()) {
      const std::size_t next = states_.size();
      std::vector<Candidate> found;
      if (!expand_round(frontier, found)) {
        report.complete = false;
        report.note = "step bound " + std::to_string(options_.step_bound) + " reached after round " +
                      std::to_string(report.rounds);
        commit(found, report);
        break;
      }
      frontier = next;
      commit(found, report);
      ++report.rounds;
    }
    report.steps = steps_;
    return report;
  }

 private:
  struct Candidate {
    Packed state;
    Witness witness;
  };

  Packed pack(const Relation& r) const {
    Packed p;
    p.arity = r.cod_arity();
    for (std::uint64_t c = 0; c < r.cod_size(); ++c)
      if (r.contains(0, c)) p.set(static_cast<unsigned>(c));
    return p;
  }

  Relation unpack(const Packed& p) const {
    return Relation::from_predicate(base_, 0, p.arity, [&](std::uint64_t, std::uint64_t c) { return p.test(static_cast<unsigned>(c)); });
  }

  unsigned digit(unsigned idx, int n, int k) const { return (idx / pow_[n - 1 - k]) % static_cast<unsigned>(base_); }
  unsigned drop(unsigned idx, int n, int k) const {
    return (idx / pow_[n - k]) * pow_[n - 1 - k] + idx % pow_[n - 1 - k];
  }

  bool tick() { return ++steps_ <= options_.step_bound; }

  void offer(const Packed& p, const Witness& w, std::vector<Candidate>& found) {
    if (index_.count(p) || pending_.count(p)) return;
    pending_.insert(p);
    found.push_back({p, w});
  }

  bool expand_round(std::size_t frontier, std::vector<Candidate>& found) {
    const int bound = options_.arity_bound;
    pending_.clear();

    for (std::size_t x = frontier; x < states_.size(); ++x) {
      const int n = states_[x].arity;
      const auto& tx = tuples_[x];
      for (int i = 0; i + 1 < n; ++i) {
        if (!tick()) return false;
        Packed r;
        r.arity = n;
        for (unsigned t : tx) {
          const unsigned di = digit(t, n, i), dj = digit(t, n, i + 1);
          r.set(t + (dj - di) * pow_[n - 1 - i] + (di - dj) * pow_[n - 2 - i]);
        }
        offer(r, {Witness::Op::Swap, "", static_cast<int>(x), -1, i, i + 1}, found);
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          if (!tick()) return false;
          Packed r;
          r.arity = n - 2;
          for (unsigned t : tx)
            if (digit(t, n, i) == digit(t, n, j)) r.set(drop(drop(t, n, j), n - 1, i));
          offer(r, {Witness::Op::Loop, "", static_cast<int>(x), -1, i, j}, found);
        }
    }

    for (int na = 0; na <= bound; ++na)
      for (int nb = 0; nb <= bound; ++nb) {
        const bool tensor_ok = na + nb <= bound;
        const bool link_ok = na >= 1 && nb >= 1 && na + nb - 2 <= bound;
        if (!tensor_ok && !link_ok) continue;
        for (int x : by_arity_[static_cast<std::size_t>(na)])
          for (int y : by_arity_[static_cast<std::size_t>(nb)]) {
            if (static_cast<std::size_t>(x) < frontier && static_cast<std::size_t>(y) < frontier) continue;
            const auto& tx = tuples_[static_cast<std::size_t>(x)];
            const auto& ty = tuples_[static_cast<std::size_t>(y)];
            if (tensor_ok) {
              if (!tick()) return false;
              Packed r;
              r.arity = na + nb;
              for (unsigned s : tx)
                for (unsigned t : ty) r.set(s * pow_[nb] + t);
              offer(r, {Witness::Op::Tensor, "", x, y, 0, 0}, found);
            }
            if (!link_ok) continue;
            for (int i = 0; i < na; ++i)
              for (int j = 0; j < nb; ++j) {
                if (!tick()) return false;
                Packed r;
                r.arity = na + nb - 2;
                for (unsigned s : tx) {
                  const unsigned ds = digit(s, na, i);
                  const unsigned rs = drop(s, na, i);
                  for (unsigned t : ty)
                    if (digit(t, nb, j) == ds) r.set(rs * pow_[nb - 1] + drop(t, nb, j));
                }
                offer(r, {Witness::Op::Link, "", x, y, i, j}, found);
              }
          }
      }
    return true;
  }

  void commit(std::vector<Candidate>& found, ClosureReport& report) {
    std::vector<std::pair<Relation, std::size_t>> rels;
    for (std::size_t k = 0; k < found.size(); ++k) {
      if (index_.count(found[k].state)) continue;
      rels.emplace_back(unpack(found[k].state), k);
    }
    std::stable_sort(rels.begin(), rels.end(), [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
    for (auto& [rel, k] : rels) {
      const Packed& p = found[k].state;
      if (index_.count(p)) continue;
      const int id = static_cast<int>(states_.size());
      index_.emplace(p, id);
      states_.push_back(p);
      std::vector<unsigned> ts;
      for (unsigned c = 0; c < pow_[p.arity]; ++c)
        if (p.test(c)) ts.push_back(c);
      tuples_.push_back(std::move(ts));
      if (by_arity_.size() <= static_cast<std::size_t>(p.arity)) by_arity_.resize(static_cast<std::size_t>(p.arity) + 1);
      by_arity_[static_cast<std::size_t>(p.arity)].push_back(id);
      report.states.push_back(std::move(rel));
      report.witnesses.push_back(found[k].witness);
    }
    // Candidate ids refer to positions in states_, which match report order.
  }

  ClosureOptions options_;
  int base_;
  std::array<unsigned, 2 * kMaxClosureArity + 1> pow_{};
  std::vector<Packed> states_;
  std::vector<std::vector<unsigned>> tuples_;
  std::vector<std::vector<int>> by_arity_ = std::vector<std::vector<int>>(kMaxClosureArity + 1);
  std::unordered_map<Packed, int, PackedHash> index_;
  std::unordered_set<Packed, PackedHash> pending_;
  std::uint64_t steps_ = 0;
};

// Splits "a,b(c,d),e" at top-level commas.
std::vector<std::string_view> split_args(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '(') ++depth;
    if (s[k] == ')') --depth;
    if (s[k] == ',' && depth == 0) {
      out.push_back(s.substr(start, k - start));
      start = k + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

int to_int(std::string_view s) {
  int v = 0;
  if (s.empty()) throw Error("witness: empty index");
  for (char c : s) {
    if (c < '0' || c > '9') throw Error("witness: bad index '" + std::string(s) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

std::vector<std::pair<std::string, Relation>> generator_states(Theory theory) {
  std::vector<GeneratorId> gens;
  for (GenTag tag : {GenTag::EpsilonDagger, GenTag::Epsilon, GenTag::Delta, GenTag::DeltaDagger})
    gens.push_back(GeneratorId::of(tag, theory));
  if (theory == Theory::MSpek) {
    gens.push_back(GeneratorId::of(GenTag::Bottom, theory));
    gens.push_back(GeneratorId::of(GenTag::BottomDagger, theory));
  }
  if (theory == Theory::HalfSpek) {
    gens.push_back(GeneratorId::of_perm(Permutation::identity(kBaseII), theory));
    gens.push_back(GeneratorId::of_perm(Permutation::parse("(01)", kBaseII), theory));
  } else {
    for (const auto& p : s4()) gens.push_back(GeneratorId::of_perm(p, theory));
  }
  std::vector<std::pair<std::string, Relation>> out;
  for (const auto& g : gens) out.emplace_back(g.dsl_name(), bend_to_state(resolve(g)));
  return out;
}

std::vector<Relation> ClosureReport::states_of_arity(int n) const {
  std::vector<Relation> out;
  for (const auto& s : states)
    if (s.cod_arity() == n) out.push_back(s);
  return out;
}

std::string ClosureReport::witness_text(int index) const {
  const Witness& w = witnesses[static_cast<std::size_t>(index)];
  switch (w.op) {
    case Witness::Op::Gen: return w.gen;
    case Witness::Op::Tensor: return "tensor(" + witness_text(w.a) + "," + witness_text(w.b) + ")";
    case Witness::Op::Link:
      return "link(" + witness_text(w.a) + "," + std::to_string(w.i) + "," + witness_text(w.b) + "," + std::to_string(w.j) + ")";
    case Witness::Op::Loop: return "loop(" + witness_text(w.a) + "," + std::to_string(w.i) + "," + std::to_string(w.j) + ")";
    case Witness::Op::Swap: return "swap(" + witness_text(w.a) + "," + std::to_string(w.i) + ")";
  }
  return "?";
}

ClosureReport enumerate_closure(const ClosureOptions& options) { return Enumerator(options).run(); }

Relation evaluate_witness(std::string_view term, Theory theory) {
  const int base = theory_base(theory);
  for (const char* op : {"tensor(", "link(", "loop(", "swap("}) {
    const std::string_view prefix(op);
    if (!term.starts_with(prefix) || !term.ends_with(")")) continue;
    const auto args = split_args(term.substr(prefix.size(), term.size() - prefix.size() - 1));
    if (prefix == "tensor(" && args.size() == 2) return tensor(evaluate_witness(args[0], theory), evaluate_witness(args[1], theory));
    if (prefix == "link(" && args.size() == 4) {
      const Relation a = evaluate_witness(args[0], theory);
      const Relation b = evaluate_witness(args[2], theory);
      return contract_legs(tensor(a, b), to_int(args[1]), a.cod_arity() + to_int(args[3]));
    }
    if (prefix == "loop(" && args.size() == 3)
      return contract_legs(evaluate_witness(args[0], theory), to_int(args[1]), to_int(args[2]));
    if (prefix == "swap(" && args.size() == 2) {
      const Relation a = evaluate_witness(args[0], theory);
      const int i = to_int(args[1]);
      const int n = a.cod_arity();
      if (i + 1 >= n) throw Error("witness: swap leg out of range");
      return compose(a, tensor(tensor(identity({base, i}), swap({base, 1}, {base, 1})), identity({base, n - i - 2})));
    }
    throw Error("witness: bad arguments in '" + std::string(term) + "'");
  }
  auto gen = parse_generator(term, theory);
  if (!gen) throw Error("witness: unknown generator '" + std::string(term) + "'");
  return bend_to_state(resolve(*gen));
}

HomSets enumerate_map_closure(Theory theory, int total_bound) {
  std::vector<GeneratorId> gens;
  for (GenTag tag : {GenTag::Delta, GenTag::DeltaDagger, GenTag::Epsilon, GenTag::EpsilonDagger, GenTag::Identity})
    gens.push_back(GeneratorId::of(tag, theory));
  if (total_bound >= 4) gens.push_back(GeneratorId::of(GenTag::Swap, theory));
  if (theory == Theory::MSpek) {
    gens.push_back(GeneratorId::of(GenTag::Bottom, theory));
    gens.push_back(GeneratorId::of(GenTag::BottomDagger, theory));
  }
  if (theory == Theory::HalfSpek) gens.push_back(GeneratorId::of_perm(Permutation::parse("(01)", kBaseII), theory));
  else
    for (const auto& p : s4()) gens.push_back(GeneratorId::of_perm(p, theory));

  HomSets homs;
  std::unordered_set<std::string> seen;
  std::vector<Relation> all;
  auto add = [&](Relation r, std::vector<Relation>& fresh) {
    if (r.dom_arity() + r.cod_arity() > total_bound) return;
    if (!seen.insert(r.key()).second) return;
    fresh.push_back(std::move(r));
  };

  std::vector<Relation> fresh;
  for (const auto& g : gens) add(resolve(g), fresh);
  std::size_t frontier = 0;
  while (!fresh.empty()) {
    std::sort(fresh.begin(), fresh.end(), canonical_less);
    for (auto& r : fresh) all.push_back(std::move(r));
    fresh.clear();
    const std::size_t end = all.size();
    for (std::size_t x = frontier; x < end; ++x) add(converse(all[x]), fresh);
    for (std::size_t x = 0; x < end; ++x)
      for (std::size_t y = 0; y < end; ++y) {
        if (x < frontier && y < frontier) continue;
        const Relation& f = all[x];
        const Relation& g = all[y];
        const int total = f.dom_arity() + f.cod_arity() + g.dom_arity() + g.cod_arity();
        if (total <= total_bound) add(tensor(f, g), fresh);
        if (f.cod() == g.dom() && f.dom_arity() + g.cod_arity() <= total_bound) add(compose(f, g), fresh);
      }
    frontier = end;
  }
  for (auto& r : all) homs[{r.dom_arity(), r.cod_arity()}].push_back(r);
  for (auto& [key, rels] : homs) std::sort(rels.begin(), rels.end(), canonical_less);
  return homs;
}

}  // namespace spek
