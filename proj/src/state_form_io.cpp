#include <algorithm>
#include <sstream>

#include "spek/error.hpp"
#include "spek/signature.hpp"

namespace spek {

std::string to_text(const StateForm& form) {
  std::ostringstream out;
  out << "FORM n=" << form.legs() << " zones=";
  for (std::size_t i = 0; i < form.zone_ids.size(); ++i)
    out << (i ? "," : "") << form.zone_ids[i] + 1 << ":" << form.zone_legs[i];
  out << "\n";
  for (const auto& c : form.constraints) out << "# constraint " << c << "\n";
  if (form.empty) {
    out << "EMPTY\n";
    return out.str();
  }
  if (form.duplication > 1) out << "# duplication x" << form.duplication << "\n";
  for (const auto& b : form.blocks) {
    out << "(";
    for (std::size_t i = 0; i < b.type.size(); ++i)
      out << (i ? "; " : "") << (b.parity[i] == kEven ? "Even" : "Odd") << "," << (b.type[i] == kType12 ? "12" : "34");
    out << ") x" << form.tuples_per_block() << "\n";
  }
  return out.str();
}

StateForm parse_state_form(std::string_view text) {
  StateForm form;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.starts_with("# constraint ")) {
      form.constraints.push_back(line.substr(13));
      continue;
    }
    if (line.starts_with("# duplication x")) {
      form.duplication = std::stoull(line.substr(15));
      continue;
    }
    if (line.front() == '#') continue;
    if (line == "EMPTY") {
      form.empty = true;
      header = true;
      continue;
    }
    if (line.starts_with("FORM ")) {
      const auto zpos = line.find("zones=");
      if (zpos == std::string::npos) throw ParseError(lineno, 1, "FORM header without zones=");
      std::istringstream zs(line.substr(zpos + 6));
      std::string item;
      while (std::getline(zs, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError(lineno, static_cast<int>(zpos) + 7, "zone entry must be <id>:<legs>");
        form.zone_ids.push_back(std::stoi(item.substr(0, colon)) - 1);
        form.zone_legs.push_back(std::stoi(item.substr(colon + 1)));
      }
      header = true;
      continue;
    }
    if (line.front() != '(') throw ParseError(lineno, 1, "unexpected line '" + line + "'");
    if (!header) throw ParseError(lineno, 1, "block before FORM header");
    const auto close = line.find(')');
    if (close == std::string::npos) throw ParseError(lineno, 1, "unterminated block signature");
    BlockSignature sig;
    std::istringstream parts(line.substr(1, close - 1));
    std::string part;
    while (std::getline(parts, part, ';')) {
      while (!part.empty() && part.front() == ' ') part.erase(part.begin());
      if (part.empty()) continue;
      const auto comma = part.find(',');
      if (comma == std::string::npos) throw ParseError(lineno, 1, "zone entry must be <Odd|Even>,<12|34>");
      const std::string par = part.substr(0, comma), typ = part.substr(comma + 1);
      if (par != "Odd" && par != "Even") throw ParseError(lineno, 1, "bad parity '" + par + "'");
      if (typ != "12" && typ != "34") throw ParseError(lineno, 1, "bad type '" + typ + "'");
      sig.parity.push_back(par == "Even" ? kEven : kOdd);
      sig.type.push_back(typ == "12" ? kType12 : kType34);
    }
    if (sig.type.size() != form.zone_legs.size())
      throw ParseError(lineno, 1, "block has " + std::to_string(sig.type.size()) + " zones, header declares " +
                                      std::to_string(form.zone_legs.size()));
    form.blocks.push_back(std::move(sig));
  }
  if (!header) throw ParseError(lineno + 1, 1, "missing FORM header or EMPTY");
  std::sort(form.blocks.begin(), form.blocks.end());
  return form;
}

}  // namespace spek
