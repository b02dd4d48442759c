#include <algorithm>
#include <map>
#include <random>

#include "spek/diagram.hpp"
#include "spek/error.hpp"
#include "spek/kernels.hpp"

namespace spek {

namespace {

using kernels::BoolTensor;

// One variable per wire and per open leg.
struct Network {
  std::vector<BoolTensor> tensors;
  std::vector<int> leg_vars;  // declaration order
};

Network build_network(const Diagram& d) {
  d.validate();
  const int base = d.base();
  std::map<PortRef, int> var_of;
  int next = 0;
  for (const auto& w : d.wires) {
    var_of[w.a] = next;
    var_of[w.b] = next;
    ++next;
  }
  Network net;
  for (const auto& l : d.legs) {
    var_of[l.port] = next;
    net.leg_vars.push_back(next++);
  }

  for (int b = 0; b < static_cast<int>(d.boxes.size()); ++b) {
    const Relation rel = resolve(d.boxes[static_cast<std::size_t>(b)].gen);
    std::vector<int> port_vars;
    for (PortRef p : d.ports_of(b)) port_vars.push_back(var_of.at(p));
    std::vector<int> vars;
    for (int v : port_vars)
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    BoolTensor t = kernels::make_tensor(base, vars);

    // A wire from a box to itself takes the diagonal.
    const int offset = digit_offset(base);
    for (const auto& [x, y] : rel.pairs()) {
      std::vector<int> value(vars.size(), -1);
      bool ok = true;
      std::size_t k = 0;
      auto assign = [&](Digit digit) {
        const auto pos = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), port_vars[k++]) - vars.begin());
        if (value[pos] >= 0 && value[pos] != digit - offset) ok = false;
        value[pos] = digit - offset;
      };
      for (Digit digit : x) assign(digit);
      for (Digit digit : y) assign(digit);
      if (!ok) continue;
      std::uint64_t index = 0;
      for (int v : value) index = index * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(v);
      t.cells[index] = 1;
    }
    net.tensors.push_back(std::move(t));
  }
  return net;
}

// Variables of a ∪ b that are still needed: legs, or shared with a third tensor.
std::vector<int> surviving_vars(const std::vector<BoolTensor>& ts, std::size_t i, std::size_t j,
                                const std::vector<int>& legs) {
  std::vector<int> out;
  auto needed = [&](int v) {
    if (std::find(legs.begin(), legs.end(), v) != legs.end()) return true;
    for (std::size_t k = 0; k < ts.size(); ++k)
      if (k != i && k != j && std::find(ts[k].vars.begin(), ts[k].vars.end(), v) != ts[k].vars.end()) return true;
    return false;
  };
  for (const auto* t : {&ts[i], &ts[j]})
    for (int v : t->vars)
      if (std::find(out.begin(), out.end(), v) == out.end() && needed(v)) out.push_back(v);
  return out;
}

bool shares(const BoolTensor& a, const BoolTensor& b) {
  for (int v : a.vars)
    if (std::find(b.vars.begin(), b.vars.end(), v) != b.vars.end()) return true;
  return false;
}

BoolTensor contract_all(Network net, const EvalOptions& options) {
  auto& ts = net.tensors;
  std::mt19937_64 rng(options.schedule_seed.value_or(0));

  // Sum out variables private to a single tensor (self-loops already collapsed).
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ts.push_back(BoolTensor{ts[i].base, {}, {1}});
    auto keep = surviving_vars(ts, i, ts.size() - 1, net.leg_vars);
    ts.pop_back();
    if (keep.size() != ts[i].vars.size()) ts[i] = kernels::project(ts[i], keep);
  }

  while (ts.size() > 1) {
    std::size_t best_i = 0, best_j = 1;
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j)
        if (shares(ts[i], ts[j])) candidates.emplace_back(i, j);
    // Disconnected pieces are joined last, as outer products.
    if (candidates.empty()) candidates.emplace_back(0, 1);

    if (options.schedule_seed) {
      const auto pick = candidates[static_cast<std::size_t>(rng() % candidates.size())];
      best_i = pick.first;
      best_j = pick.second;
    } else {
      std::size_t best_size = SIZE_MAX;
      for (auto [i, j] : candidates) {
        const std::size_t size = surviving_vars(ts, i, j, net.leg_vars).size();
        if (size < best_size) {
          best_size = size;
          best_i = i;
          best_j = j;
        }
      }
    }
    const auto keep = surviving_vars(ts, best_i, best_j, net.leg_vars);
    BoolTensor joined = kernels::join_parallel(ts[best_i], ts[best_j], keep);
    ts.erase(ts.begin() + static_cast<std::ptrdiff_t>(best_j));
    ts[best_i] = std::move(joined);
  }
  if (ts.empty()) return BoolTensor{kBaseIV, {}, {1}};
  return std::move(ts.front());
}

Relation to_relation(const Diagram& d, const BoolTensor& t, const std::vector<int>& dom_vars,
                     const std::vector<int>& cod_vars) {
  std::vector<int> order = dom_vars;
  order.insert(order.end(), cod_vars.begin(), cod_vars.end());
  BoolTensor arranged = kernels::project(t, order);
  const int base = d.base();
  const std::uint64_t cod_size = ipow(static_cast<std::uint64_t>(base), static_cast<int>(cod_vars.size()));
  return Relation::from_predicate(base, static_cast<int>(dom_vars.size()), static_cast<int>(cod_vars.size()),
                                  [&](std::uint64_t r, std::uint64_t c) { return arranged.cells[r * cod_size + c] != 0; });
}

}  // namespace

Relation evaluate(const Diagram& d, const EvalOptions& options) {
  Network net = build_network(d);
  std::vector<int> dom_vars, cod_vars;
  for (std::size_t k = 0; k < d.legs.size(); ++k)
    (d.legs[k].dir == LegDir::In ? dom_vars : cod_vars).push_back(net.leg_vars[k]);
  BoolTensor t = contract_all(net, options);
  t.base = d.base();
  return to_relation(d, t, dom_vars, cod_vars);
}

Relation evaluate_state(const Diagram& d, const EvalOptions& options) {
  Network net = build_network(d);
  const std::vector<int> legs = net.leg_vars;
  BoolTensor t = contract_all(net, options);
  t.base = d.base();
  return to_relation(d, t, {}, legs);
}

}  // namespace spek
