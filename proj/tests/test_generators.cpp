#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "spek/error.hpp"
#include "spek/generators.hpp"
#include "spek/verification.hpp"

using namespace spek;

namespace {

Relation gen(GenTag t, Theory th) { return resolve(GeneratorId::of(t, th)); }

Permutation applied(const std::vector<Permutation>& word) {
  Permutation p = Permutation::identity(kBaseIV);
  for (const auto& f : word) p = f * p;
  return p;
}

std::vector<Permutation> phased() {
  std::vector<Permutation> out;
  for (const auto& p : s4())
    if (classify_permutation(p) == Phase::Phased) out.push_back(p);
  return out;
}

// Fewest Σ letters in any word p0 Σ p1 Σ ... pk with phased p_i.
int min_sigmas(const Permutation& target) {
  const auto ph = phased();
  std::set<std::vector<Digit>> reach;
  for (const auto& p : ph) reach.insert(p.images());
  for (int k = 0; k <= 4; ++k) {
    if (reach.count(target.images())) return k;
    std::set<std::vector<Digit>> next;
    for (const auto& im : reach)
      for (const auto& p : ph) next.insert((p * sigma_permutation() * Permutation(kBaseIV, im)).images());
    reach = next;
  }
  return -1;
}

}  // namespace

TEST_CASE("generator relations") {
  const Relation eps = gen(GenTag::Epsilon, Theory::Spek);
  CHECK(to_text(eps) == "REL 4^1 -> 4^0\n1 ~ *\n3 ~ *\n");
  CHECK(to_text(gen(GenTag::Delta, Theory::HalfSpek)) == "REL 2^1 -> 2^2\n0 ~ 00\n0 ~ 11\n1 ~ 01\n1 ~ 10\n");
  CHECK(to_text(gen(GenTag::Bottom, Theory::MSpek)) == "REL 4^0 -> 4^1\n1\n2\n3\n4\n");
  CHECK_THROWS_AS(gen(GenTag::Bottom, Theory::Spek), TheoryViolation);
  CHECK(gen(GenTag::EpsilonDagger, Theory::Spek) == converse(eps));

  const Relation delta = gen(GenTag::Delta, Theory::Spek);
  CHECK(to_text(delta) ==
        "REL 4^1 -> 4^2\n1 ~ 11\n1 ~ 22\n2 ~ 12\n2 ~ 21\n3 ~ 33\n3 ~ 44\n4 ~ 34\n4 ~ 43\n");
  CHECK(gen(GenTag::DeltaDagger, Theory::Spek) == converse(delta));
  CHECK(gen(GenTag::Swap, Theory::Spek) == swap({kBaseIV, 1}, {kBaseIV, 1}));
}

TEST_CASE("permutation parsing and naming") {
  CHECK(Permutation::parse("(12)") == Permutation::parse("(12)(3)(4)"));
  CHECK(Permutation::parse("") == Permutation::identity(kBaseIV));
  CHECK(Permutation::parse("()").is_identity());
  CHECK(Permutation::parse("(12)").name() == "(12)(3)(4)");
  CHECK(sigma_permutation() == Permutation::parse("(1)(3)(24)"));
  CHECK(sigma_permutation().name() == "(1)(24)(3)");
  CHECK(Permutation::parse("(01)", kBaseII).name() == "(01)");
  CHECK_THROWS(Permutation::parse("(15)"));
  CHECK_THROWS(Permutation::parse("(121)"));
}

TEST_CASE("S4 group table") {
  const auto& g = s4();
  REQUIRE(g.size() == 24);
  std::set<std::string> keys;
  for (const auto& p : g) keys.insert(p.relation().key());
  CHECK(keys.size() == 24);
  for (const auto& a : g) {
    CHECK(keys.count(converse(a.relation()).key()));
    CHECK(converse(a.relation()) == a.inverse().relation());
    for (const auto& b : g) {
      CHECK(keys.count(compose(a.relation(), b.relation()).key()));
      CHECK(compose(b.relation(), a.relation()) == (a * b).relation());
    }
  }
}

TEST_CASE("phased classification") {
  CHECK(classify_permutation(Permutation::identity(kBaseIV)) == Phase::Phased);
  CHECK(classify_permutation(sigma_permutation()) == Phase::Unphased);
  CHECK(classify_permutation(Permutation::parse("(12)(34)")) == Phase::Phased);
  CHECK(phased().size() == 4);
}

TEST_CASE("sigma decomposition") {
  CHECK(sigma_decompose(Permutation::identity(kBaseIV)).empty());
  const auto s = sigma_decompose(sigma_permutation());
  REQUIRE(s.size() == 1);
  CHECK(s[0] == sigma_permutation());
  for (const auto& p : s4()) {
    const auto word = sigma_decompose(p);
    CHECK(applied(word) == p);
    const int sigmas = static_cast<int>(std::count(word.begin(), word.end(), sigma_permutation()));
    CHECK(sigmas == min_sigmas(p));
    for (std::size_t k = 0; k + 1 < word.size(); ++k)
      CHECK_FALSE((classify_permutation(word[k]) == Phase::Phased && classify_permutation(word[k + 1]) == Phase::Phased));
  }
  const Permutation cyc = Permutation::parse("(1234)");
  CHECK(applied(sigma_decompose(cyc)) == cyc);
  CHECK(min_sigmas(cyc) > 0);
}

TEST_CASE("HalfSpek components") {
  const auto eps = GeneratorId::of(GenTag::Epsilon, Theory::Spek);
  CHECK(half_component(eps, Side::S12) == GeneratorId::of(GenTag::Epsilon, Theory::HalfSpek));
  const auto p12 = GeneratorId::of_perm(Permutation::parse("(12)"), Theory::Spek);
  CHECK(resolve(half_component(p12, Side::S12)) == Permutation::parse("(01)", kBaseII).relation());
  CHECK(resolve(half_component(p12, Side::S34)) == identity({kBaseII, 1}));
  CHECK_THROWS_AS(half_component(GeneratorId::of_perm(sigma_permutation(), Theory::Spek), Side::S12), NotParallel);
  CHECK_THROWS_AS(half_component(GeneratorId::of(GenTag::Bottom, Theory::MSpek), Side::S12), NotParallel);

  // Every connected phased generator is the union of its two relabelled
  // shadows. swap is not: it relates mixed-type pairs such as 13 ~ 31.
  std::vector<GeneratorId> gens;
  for (GenTag t : {GenTag::Delta, GenTag::DeltaDagger, GenTag::Epsilon, GenTag::EpsilonDagger, GenTag::Identity})
    gens.push_back(GeneratorId::of(t, Theory::Spek));
  for (const auto& p : phased()) gens.push_back(GeneratorId::of_perm(p, Theory::Spek));
  for (const auto& g : gens) {
    CHECK(g.is_phased());
    const Relation a = relabel_half(resolve(half_component(g, Side::S12)), Side::S12);
    const Relation b = relabel_half(resolve(half_component(g, Side::S34)), Side::S34);
    const Relation whole = resolve(g);
    CHECK(a.count() + b.count() == whole.count());
    for (const auto& [x, y] : a.pairs()) CHECK(whole.contains(x, y));
    for (const auto& [x, y] : b.pairs()) CHECK(whole.contains(x, y));
  }
}

TEST_CASE("DSL generator names") {
  for (const char* name : {"delta", "delta+", "eps", "eps+", "id", "swap", "perm((24))", "perm((12)(34))"}) {
    const auto g = parse_generator(name, Theory::Spek);
    REQUIRE(g.has_value());
    CHECK(parse_generator(g->dsl_name(), Theory::Spek) == g);
  }
  CHECK(parse_generator("bot", Theory::MSpek).has_value());
  CHECK_FALSE(parse_generator("gamma", Theory::Spek).has_value());
  CHECK(parse_generator("perm((24))", Theory::Spek)->dagger() == *parse_generator("perm((24))", Theory::Spek));
  CHECK(parse_generator("perm((123))", Theory::Spek)->dagger() == *parse_generator("perm((132))", Theory::Spek));
}

TEST_CASE("basis structure smoke test") {
  for (const auto& r : check_basis_structure(gen(GenTag::Delta, Theory::Spek), gen(GenTag::Epsilon, Theory::Spek), "spek"))
    CHECK_MESSAGE(r.pass, r.line());
}
