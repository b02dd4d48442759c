#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spek/generators.hpp"
#include "spek/relation.hpp"

namespace spek {

enum class PortKind { Dom, Cod };

// A slot of a box: dom slots are spelled <id>.in, <id>.in2, ...; cod slots
// <id>.1, <id>.2, ... Slots are 0-based here.
struct PortRef {
  int box = 0;
  PortKind kind = PortKind::Dom;
  int slot = 0;

  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

struct Box {
  std::string id;
  GeneratorId gen;
};

struct Wire {
  PortRef a;
  PortRef b;
};

enum class LegDir { In, Out };

struct OpenLeg {
  PortRef port;
  LegDir dir = LegDir::Out;
};

// Boxes joined by undirected wires. Every port is used by exactly one wire
// or one open leg. Wires may join any two ports (cod-cod and dom-dom
// included): with the self-dual compact structure these are cups and caps.
struct Diagram {
  Theory theory = Theory::Spek;
  std::vector<Box> boxes;
  std::vector<Wire> wires;
  std::vector<OpenLeg> legs;

  int base() const { return theory_base(theory); }
  int add_box(std::string id, GeneratorId gen);
  // Id of the form <prefix><n> that is not yet taken.
  std::string fresh_id(std::string_view prefix) const;
  void connect(PortRef a, PortRef b) { wires.push_back({a, b}); }
  void add_leg(PortRef port, LegDir dir) { legs.push_back({port, dir}); }

  int in_arity() const;
  int out_arity() const;
  std::vector<PortRef> ports_of(int box) const;
  std::string port_name(PortRef p) const;

  // Throws Error when a port is unused, used twice, or out of range.
  void validate() const;
};

// Parses the line-oriented diagram language:
//   theory spek|mspek|half
//   box <id>: <generator>
//   wire <port> <port>
//   in <port>...
//   out <port>...
// Statements end at a newline or ';'; '#' starts a comment. Without a theory
// directive the theory is `fallback`, promoted to MSpek when bot is used.
// Errors are ParseError with 1-based line and column.
Diagram parse_diagram(std::string_view source, std::optional<Theory> fallback = std::nullopt);

// Canonical source text; parse_diagram(to_dsl(d)) reproduces d.
std::string to_dsl(const Diagram& d);

struct EvalOptions {
  // When set, contractions are chosen at random from this seed instead of
  // greedily; the result is the same relation.
  std::optional<std::uint64_t> schedule_seed;
};

// The relation denoted by the diagram: dom is the input legs, cod the output
// legs, each in declaration order.
Relation evaluate(const Diagram& d, const EvalOptions& options = {});

// As evaluate, reading every open leg as an output in declaration order.
Relation evaluate_state(const Diagram& d, const EvalOptions& options = {});

// Turns open leg `leg` around with an explicit cup (input -> output) or cap
// (output -> input) built from delta and eps. A bent input becomes the first
// output; a bent output becomes the last input.
Diagram bend_leg(const Diagram& d, int leg);

// Every leg relabelled as an output, in declaration order. The cup is the
// diagonal, so this agrees with bending each input.
Diagram as_state_diagram(const Diagram& d);

}  // namespace spek
