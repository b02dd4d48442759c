// Command-line driver: eval, form, compare, enumerate, verify.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spek/capacity.hpp"
#include "spek/closure.hpp"
#include "spek/diagram.hpp"
#include "spek/error.hpp"
#include "spek/random_diagram.hpp"
#include "spek/signature.hpp"
#include "spek/verification.hpp"
#include "spek/zones.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace spek;

namespace {

enum Exit { kOk = 0, kParse = 1, kCapacity = 2, kNotSpek = 3, kMismatch = 4, kVerifyFailed = 5 };

struct Config {
  std::string theory;
  int arity = 1;
  std::uint64_t seed = 7;
  std::string format = "text";
  int max_arity_bound = 3;
  bool arity_given = false;
};

bool jsonl(const Config& c) { return c.format == "jsonl"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::optional<Theory> theory_of(const Config& c) {
  if (c.theory.empty()) return std::nullopt;
  auto t = parse_theory(c.theory);
  if (!t) throw Error("unknown theory '" + c.theory + "'");
  return t;
}

json tuple_json(const Tuple& t) { return json(t); }

void print_relation(const Relation& r, const Config& c) {
  if (!jsonl(c)) {
    std::cout << to_text(r);
    return;
  }
  std::cout << json{{"kind", "rel"}, {"dom", r.dom().name()}, {"cod", r.cod().name()}, {"count", r.count()}}.dump() << "\n";
  for (const auto& [x, y] : r.pairs())
    std::cout << json{{"kind", "pair"}, {"x", tuple_json(x)}, {"y", tuple_json(y)}}.dump() << "\n";
}

void print_form(const StateForm& f, const Config& c) {
  if (!jsonl(c)) {
    std::cout << to_text(f);
    return;
  }
  json zones = json::array();
  for (std::size_t i = 0; i < f.zone_ids.size(); ++i) zones.push_back({f.zone_ids[i] + 1, f.zone_legs[i]});
  std::cout << json{{"kind", "form"}, {"empty", f.empty}, {"n", f.legs()}, {"zones", zones}}.dump() << "\n";
  for (const auto& eq : f.constraints) std::cout << json{{"kind", "constraint"}, {"equation", eq}}.dump() << "\n";
  if (f.empty) return;
  for (const auto& b : f.blocks) {
    json sig = json::array();
    for (std::size_t i = 0; i < b.type.size(); ++i)
      sig.push_back({b.parity[i] == kEven ? "Even" : "Odd", b.type[i] == kType12 ? "12" : "34"});
    std::cout << json{{"kind", "block"}, {"signature", sig}, {"count", f.tuples_per_block()}}.dump() << "\n";
  }
}

void print_check(const CheckResult& r, const Config& c) {
  if (jsonl(c))
    std::cout << json{{"kind", "check"}, {"pass", r.pass}, {"check", r.check}, {"detail", r.detail}}.dump() << "\n";
  else
    std::cout << r.line() << "\n";
}

void note(const std::string& text, const Config& c) {
  if (jsonl(c)) std::cout << json{{"kind", "note"}, {"text", text}}.dump() << "\n";
  else std::cout << "# " << text << "\n";
}

int cmd_eval(const std::string& path, const Config& c) {
  const Diagram d = parse_diagram(read_file(path), theory_of(c));
  print_relation(evaluate(d), c);
  return kOk;
}

Diagram spek_only(const std::string& path, const Config& c) {
  Diagram d = parse_diagram(read_file(path), theory_of(c));
  if (d.theory != Theory::Spek) throw TheoryViolation("form needs a Spek diagram; " + path + " is " + theory_name(d.theory));
  return d;
}

int cmd_form(const std::string& path, const Config& c) {
  print_form(closed_form(spek_only(path, c)), c);
  return kOk;
}

// One comparison of expand(form) against brute force, legs in zone order.
bool compare_one(const std::string& label, const Diagram& d, const std::optional<StateForm>& given, const Config& c) {
  const ZoneDecomposition z = zone_decompose(d);
  const StateForm form = given ? *given : internal_form(z, zone_profiles(z));
  const Relation brute = permute_legs(evaluate_state(d), z.leg_order);
  const Relation closed = expand(form);
  const bool match = closed == brute;
  if (jsonl(c)) {
    std::cout << json{{"kind", "compare"}, {"case", label}, {"match", match}, {"tuples", brute.count()}}.dump() << "\n";
  } else if (!match) {
    std::cout << "MISMATCH " << label << "\n--- diagram\n"
              << to_dsl(d) << "--- form\n"
              << to_text(form) << "--- expand(form)\n"
              << to_text(closed) << "--- evaluate (zone leg order)\n"
              << to_text(brute);
  }
  return match;
}

int cmd_compare(const std::vector<std::string>& paths, const std::string& form_path, int random, const Config& c) {
  std::size_t total = 0, bad = 0;
  std::optional<StateForm> given;
  if (!form_path.empty()) {
    if (paths.size() != 1) throw Error("--form needs exactly one diagram");
    given = parse_state_form(read_file(form_path));
  }
  for (const auto& p : paths) {
    ++total;
    if (!compare_one(p, spek_only(p, c), given, c)) ++bad;
  }
  for (int k = 0; k < random; ++k) {
    const std::uint64_t seed = c.seed * 1000003ULL + static_cast<std::uint64_t>(k);
    ++total;
    if (!compare_one("random seed=" + std::to_string(c.seed) + " #" + std::to_string(k), random_spek_diagram(seed), std::nullopt, c))
      ++bad;
  }
  const std::string summary = std::to_string(total - bad) + "/" + std::to_string(total) + " closed forms equal brute force";
  if (jsonl(c)) std::cout << json{{"kind", "summary"}, {"cases", total}, {"mismatches", bad}}.dump() << "\n";
  else std::cout << (bad == 0 ? "OK " : "FAILED ") << summary << "\n";
  return bad == 0 ? kOk : kMismatch;
}

int arity_bound(const Config& c, int requested) {
  if (requested > c.max_arity_bound)
    throw CapacityExceeded("arity " + std::to_string(requested) + " above --max-arity-bound " + std::to_string(c.max_arity_bound));
  if (requested >= 4) std::cerr << "warning: arity bound " << requested << " enumerates ~37k states and takes minutes\n";
  return requested;
}

ClosureReport closure_for(Theory t, int bound) {
  ClosureOptions o;
  o.theory = t;
  o.arity_bound = bound;
  return enumerate_closure(o);
}

int cmd_enumerate(const std::string& out_dir, const Config& c) {
  const Theory t = theory_of(c).value_or(Theory::Spek);
  const int bound = arity_bound(c, c.arity);
  // Intermediates may be wider than the reported arity; MSpek counts at n=2
  // still grow between working bounds 2 and 3.
  const int working = std::max(bound, std::min(3, c.max_arity_bound));
  const ClosureReport rep = closure_for(t, working);
  if (!rep.complete) note("incomplete: " + rep.note, c);
  if (working > bound) note("intermediates bounded by arity " + std::to_string(working), c);

  for (int total = 0; total <= bound; ++total)
    for (int m = 0; m <= total; ++m) {
      const int n = total - m;
      std::vector<std::pair<Relation, int>> homs;
      for (std::size_t k = 0; k < rep.states.size(); ++k)
        if (rep.states[k].cod_arity() == total) homs.emplace_back(bend_to_map(rep.states[k], m), static_cast<int>(k));
      std::sort(homs.begin(), homs.end(), [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
      const std::size_t nonempty = static_cast<std::size_t>(
          std::count_if(homs.begin(), homs.end(), [](const auto& h) { return !h.first.empty(); }));
      if (m == 0) {
        if (jsonl(c))
          std::cout << json{{"kind", "states"}, {"theory", theory_name(t)}, {"n", n}, {"count", nonempty}, {"with_empty", homs.size()}}.dump()
                    << "\n";
        else
          std::cout << theory_name(t) << " states n=" << n << ": " << nonempty << " (+ empty relation)\n";
      }
      if (out_dir.empty()) continue;
      fs::create_directories(out_dir);
      std::ofstream f(fs::path(out_dir) / (theory_name(t) + "_" + std::to_string(m) + "_" + std::to_string(n) + ".rel"));
      f << "# " << theory_name(t) << "(IV^" << m << ", IV^" << n << "): " << homs.size()
        << " relations; the empty relation is a diagram value and is listed for completeness\n";
      for (const auto& [rel, k] : homs) f << "# witness: " << rep.witness_text(k) << "\n" << to_text(rel);
    }
  if (t == Theory::MSpek)
    note("MSpek is the closure of the generators; no claim is made that it exhausts the toy theory", c);
  return rep.complete ? kOk : kCapacity;
}

int cmd_verify(const std::string& suite, const std::string& inject, const Config& c) {
  const bool all = suite == "all";
  if (!all && suite != "kbp" && suite != "laws" && suite != "duality" && suite != "cardinality")
    throw Error("unknown suite '" + suite + "'");
  std::vector<CheckResult> results;
  const int bound = arity_bound(c, c.arity_given ? c.arity : 3);

  if (all || suite == "laws") {
    for (Theory t : {Theory::Spek, Theory::HalfSpek}) {
      auto r = check_basis_structure(resolve(GeneratorId::of(GenTag::Delta, t)), resolve(GeneratorId::of(GenTag::Epsilon, t)),
                                     t == Theory::Spek ? "spek" : "half");
      results.insert(results.end(), r.begin(), r.end());
    }
    auto g = ghz_delta_identity();
    results.insert(results.end(), g.begin(), g.end());
  }
  std::optional<ClosureReport> spek, mspek;
  auto need = [&](std::optional<ClosureReport>& slot, Theory t) -> const ClosureReport& {
    if (!slot) slot = closure_for(t, bound);
    return *slot;
  };
  if (all || suite == "kbp") {
    for (Theory t : {Theory::Spek, Theory::MSpek}) {
      const auto& rep = need(t == Theory::Spek ? spek : mspek, t);
      std::size_t checked = 0, failed = 0;
      for (const auto& s : rep.states) {
        if (s.empty()) continue;
        ++checked;
        if (!check_kbp(s).ok()) ++failed;
      }
      results.push_back({failed == 0 && rep.complete, "kbp/" + theory_name(t),
                         std::to_string(checked) + " states n<=" + std::to_string(bound) + ", " + std::to_string(failed) +
                             " violations (empty relation skipped)"});
    }
  }
  if (all || suite == "duality") {
    auto r = check_map_state_duality(need(spek, Theory::Spek), enumerate_map_closure(Theory::Spek, 3));
    results.insert(results.end(), r.begin(), r.end());
  }
  if (all || suite == "cardinality") {
    auto r = check_mspek_cardinalities(need(spek, Theory::Spek), need(mspek, Theory::MSpek));
    results.insert(results.end(), r.begin(), r.end());
  }
  if (!inject.empty()) {
    const Relation s = parse_relation(read_file(inject));
    if (!s.is_state()) throw Error("injected relation must be a state");
    CheckResult r = check_state_cardinality(s, Theory::MSpek);
    r.check = "cardinality/injected";
    results.push_back(r);
    const KbpVerdict v = check_kbp(s);
    results.push_back({v.ok(), "kbp/injected", v.global_ok ? "subsystem violation" : "global violation"});
  }
  bool ok = true;
  for (const auto& r : results) {
    print_check(r, c);
    ok = ok && r.pass;
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spekkens toy theory as a category of relations"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--theory", cfg.theory, "spek | mspek | half");
  auto* arity = app.add_option("--arity", cfg.arity, "arity bound for enumerate / verify")->check(CLI::Range(1, 4));
  app.add_option("--seed", cfg.seed, "seed for randomized diagrams");
  app.add_option("--format", cfg.format, "text | jsonl")->check(CLI::IsMember({"text", "jsonl"}));
  app.add_option("--max-arity-bound", cfg.max_arity_bound, "largest arity bound accepted")->check(CLI::Range(1, 4));

  std::string path, form_path, out_dir, suite = "all", inject;
  std::vector<std::string> paths;
  int random = 0;

  auto* eval = app.add_subcommand("eval", "evaluate a diagram to a relation");
  eval->add_option("path", path, ".spekd file")->required();
  auto* form = app.add_subcommand("form", "closed-form block signatures of a Spek state diagram");
  form->add_option("path", path, ".spekd file")->required();
  auto* compare = app.add_subcommand("compare", "check expand(closed form) == evaluate");
  compare->add_option("paths", paths, ".spekd files");
  compare->add_option("--form", form_path, "compare against this form instead of the computed one");
  compare->add_option("--random", random, "number of random diagrams")->check(CLI::NonNegativeNumber);
  auto* enumerate = app.add_subcommand("enumerate", "closure of the generators up to --arity");
  enumerate->add_option("--out", out_dir, "write one REL file per hom-set here");
  auto* verify = app.add_subcommand("verify", "law, KBP, duality and cardinality suites");
  verify->add_option("--suite", suite, "kbp | laws | duality | cardinality | all");
  verify->add_option("--inject-state", inject, "also check this REL state");

  CLI11_PARSE(app, argc, argv);

  cfg.arity_given = arity->count() > 0;
  try {
    if (*eval) return cmd_eval(path, cfg);
    if (*form) return cmd_form(path, cfg);
    if (*compare) return cmd_compare(paths, form_path, random, cfg);
    if (*enumerate) return cmd_enumerate(out_dir, cfg);
    if (*verify) return cmd_verify(suite, inject, cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const CapacityExceeded& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kCapacity;
  } catch (const TheoryViolation& e) {
    std::cerr << "theory: " << e.what() << "\n";
    return kNotSpek;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kOk;
}
