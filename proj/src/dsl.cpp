#include <cctype>
#include <map>
#include <set>

#include "spek/diagram.hpp"
#include "spek/error.hpp"

namespace spek {

namespace {

struct Token {
  std::string text;
  int line;
  int column;
};

// Splits source into statements of whitespace-separated tokens. Parentheses
// keep a token together, so "perm((12) (34))" is one token.
std::vector<std::vector<Token>> statements_of(std::string_view src) {
  std::vector<std::vector<Token>> out;
  std::vector<Token> current;
  int line = 1, column = 1;
  std::size_t i = 0;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      flush();
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == ';') {
      flush();
      ++i;
      ++column;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++column;
      continue;
    }
    Token tok{"", line, column};
    int depth = 0;
    while (i < src.size()) {
      const char d = src[i];
      if (d == '\n' || d == '#' || (depth == 0 && (d == ';' || std::isspace(static_cast<unsigned char>(d))))) break;
      if (d == '(') ++depth;
      if (d == ')' && depth > 0) --depth;
      tok.text.push_back(d);
      ++i;
      // Column counts code points, not UTF-8 continuation bytes.
      if ((static_cast<unsigned char>(d) & 0xC0) != 0x80) ++column;
    }
    if (depth > 0) throw ParseError(tok.line, tok.column, "unbalanced '(' in '" + tok.text + "'");
    current.push_back(std::move(tok));
  }
  flush();
  return out;
}

struct PendingBox {
  std::string id;
  Token gen;
};

class Parser {
 public:
  Parser(std::string_view src, std::optional<Theory> fallback) : statements_(statements_of(src)), fallback_(fallback) {}

  Diagram run() {
    std::optional<Theory> declared;
    bool uses_bot = false;
    // First pass: theory directive and box declarations.
    for (const auto& st : statements_) {
      const Token& head = st.front();
      if (head.text == "theory") {
        if (st.size() != 2) throw ParseError(head.line, head.column, "expected 'theory <spek|mspek|half>'");
        auto t = parse_theory(st[1].text);
        if (!t) throw ParseError(st[1].line, st[1].column, "unknown theory '" + st[1].text + "'");
        if (declared && *declared != *t) throw ParseError(head.line, head.column, "conflicting theory directives");
        declared = t;
      } else if (head.text == "box") {
        declare_box(st);
        const std::string& g = boxes_.back().gen.text;
        if (g == "bot" || g == "bot+") uses_bot = true;
      } else if (head.text != "wire" && head.text != "in" && head.text != "out") {
        throw ParseError(head.line, head.column, "unknown statement '" + head.text + "'");
      }
    }
    Diagram d;
    d.theory = declared ? *declared : (uses_bot ? Theory::MSpek : fallback_.value_or(Theory::Spek));
    for (const auto& pb : boxes_) {
      auto gen = parse_generator(pb.gen.text, d.theory);
      if (!gen) throw ParseError(pb.gen.line, pb.gen.column, "unknown generator '" + pb.gen.text + "'");
      if ((gen->tag == GenTag::Bottom || gen->tag == GenTag::BottomDagger) && d.theory != Theory::MSpek)
        throw ParseError(pb.gen.line, pb.gen.column, "bot is not a generator of " + theory_name(d.theory));
      d.add_box(pb.id, *gen);
    }

    // Second pass: wires and legs.
    std::map<PortRef, Token> used;
    auto take = [&](const Token& tok) {
      PortRef p = port(d, tok);
      if (auto it = used.find(p); it != used.end())
        throw ParseError(tok.line, tok.column,
                         "port " + tok.text + " already used at " + std::to_string(it->second.line) + ":" +
                             std::to_string(it->second.column));
      used.emplace(p, tok);
      return p;
    };
    for (const auto& st : statements_) {
      const Token& head = st.front();
      if (head.text == "wire") {
        if (st.size() != 3)
          throw ParseError(head.line, head.column,
                           st.size() < 3 ? "incomplete wire: expected two ports" : "wire takes exactly two ports");
        const PortRef a = take(st[1]);
        const PortRef b = take(st[2]);
        d.connect(a, b);
      } else if (head.text == "in" || head.text == "out") {
        if (st.size() < 2) throw ParseError(head.line, head.column, "'" + head.text + "' needs at least one port");
        for (std::size_t k = 1; k < st.size(); ++k)
          d.add_leg(take(st[k]), head.text == "in" ? LegDir::In : LegDir::Out);
      }
    }

    for (int b = 0; b < static_cast<int>(d.boxes.size()); ++b)
      for (PortRef p : d.ports_of(b))
        if (!used.count(p)) {
          const Token& at = boxes_[static_cast<std::size_t>(b)].gen;
          throw ParseError(at.line, at.column, "dangling port " + d.port_name(p));
        }
    return d;
  }

 private:
  void declare_box(const std::vector<Token>& st) {
    const Token& head = st.front();
    // Accept "box e: gen", "box e : gen" and "box e:gen".
    std::string id;
    std::optional<Token> gen;
    std::size_t k = 1;
    if (k < st.size()) {
      id = st[k].text;
      const auto colon = id.find(':');
      if (colon != std::string::npos) {
        std::string rest = id.substr(colon + 1);
        id = id.substr(0, colon);
        if (!rest.empty()) gen = Token{rest, st[k].line, st[k].column + static_cast<int>(colon) + 1};
        ++k;
      } else {
        ++k;
        if (k < st.size() && st[k].text.starts_with(":")) {
          std::string rest = st[k].text.substr(1);
          if (!rest.empty()) gen = Token{rest, st[k].line, st[k].column + 1};
          ++k;
        } else {
          throw ParseError(head.line, head.column, "expected 'box <id>: <generator>'");
        }
      }
    }
    if (!gen && k < st.size()) gen = st[k++];
    if (id.empty() || !gen) throw ParseError(head.line, head.column, "expected 'box <id>: <generator>'");
    if (k != st.size()) throw ParseError(st[k].line, st[k].column, "unexpected '" + st[k].text + "' after generator");
    for (char c : id)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw ParseError(head.line, head.column, "box id '" + id + "' must be alphanumeric");
    if (!ids_.insert(id).second) throw ParseError(head.line, head.column, "box '" + id + "' declared twice");
    boxes_.push_back({id, *gen});
  }

  PortRef port(const Diagram& d, const Token& tok) const {
    const auto dot = tok.text.find('.');
    if (dot == std::string::npos) throw ParseError(tok.line, tok.column, "expected a port <box>.<slot>, got '" + tok.text + "'");
    const std::string id = tok.text.substr(0, dot);
    const std::string slot = tok.text.substr(dot + 1);
    int box = -1;
    for (int b = 0; b < static_cast<int>(d.boxes.size()); ++b)
      if (d.boxes[static_cast<std::size_t>(b)].id == id) box = b;
    if (box < 0) throw ParseError(tok.line, tok.column, "unknown box '" + id + "'");

    PortRef p{box, PortKind::Cod, 0};
    auto number = [&](std::string_view digits) {
      if (digits.empty() || digits.size() > 3) return -1;
      for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
      return std::stoi(std::string(digits));
    };
    if (slot.starts_with("in")) {
      p.kind = PortKind::Dom;
      const int n = slot.size() == 2 ? 1 : number(std::string_view(slot).substr(2));
      p.slot = n - 1;
    } else {
      p.slot = number(slot) - 1;
    }
    if (p.slot < 0) throw ParseError(tok.line, tok.column, "bad port slot '" + slot + "'");
    const auto& gen = d.boxes[static_cast<std::size_t>(box)].gen;
    const int limit = p.kind == PortKind::Dom ? gen.dom_arity() : gen.cod_arity();
    if (p.slot >= limit)
      throw ParseError(tok.line, tok.column,
                       "arity mismatch: " + gen.dsl_name() + " has " + std::to_string(gen.dom_arity()) +
                           " input(s) and " + std::to_string(gen.cod_arity()) + " output(s), no port " + tok.text);
    return p;
  }

  std::vector<std::vector<Token>> statements_;
  std::optional<Theory> fallback_;
  std::vector<PendingBox> boxes_;
  std::set<std::string> ids_;
};

}  // namespace

Diagram parse_diagram(std::string_view source, std::optional<Theory> fallback) {
  return Parser(source, fallback).run();
}

}  // namespace spek
