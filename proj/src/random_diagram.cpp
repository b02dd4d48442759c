#include "spek/random_diagram.hpp"

#include <random>

namespace spek {

namespace {

class Grower {
 public:
  Grower(std::uint64_t seed, const RandomDiagramOptions& options) : rng_(seed), options_(options) {
    d_.theory = Theory::Spek;
  }

  Diagram run() {
    new_zone();
    while (boxes_left() > 0) {
      // Leave room to cap surplus wires at the end.
      const int surplus = static_cast<int>(open_.size()) - options_.max_legs;
      if (surplus + 1 >= boxes_left()) break;
      if (draw(8) == 0 && d_.boxes.size() > 2) break;
      switch (draw(7)) {
        case 0: new_zone(); break;
        case 1: grow_delta(); break;
        case 2:
        case 3: grow_perm(); break;
        case 4: merge(); break;
        case 5: loop(); break;
        case 6: cap(); break;
      }
    }
    while (static_cast<int>(open_.size()) > options_.max_legs) cap();
    for (PortRef p : open_) d_.add_leg(p, LegDir::Out);
    return d_;
  }

 private:
  int boxes_left() const { return options_.max_boxes - static_cast<int>(d_.boxes.size()); }
  std::uint64_t draw(std::uint64_t n) { return rng_() % n; }

  PortRef take_open() {
    const auto k = static_cast<std::size_t>(draw(open_.size()));
    const PortRef p = open_[k];
    open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(k));
    return p;
  }

  int box(GeneratorId gen) { return d_.add_box("b" + std::to_string(d_.boxes.size()), std::move(gen)); }

  void new_zone() {
    const int b = box(GeneratorId::of(GenTag::EpsilonDagger, Theory::Spek));
    open_.push_back({b, PortKind::Cod, 0});
  }

  void grow_delta() {
    if (open_.empty()) return new_zone();
    const PortRef p = take_open();
    const int b = box(GeneratorId::of(GenTag::Delta, Theory::Spek));
    d_.connect(p, {b, PortKind::Dom, 0});
    open_.push_back({b, PortKind::Cod, 0});
    open_.push_back({b, PortKind::Cod, 1});
  }

  void grow_perm() {
    if (open_.empty()) return new_zone();
    const PortRef p = take_open();
    const auto& perms = s4();
    const int b = box(GeneratorId::of_perm(perms[static_cast<std::size_t>(draw(perms.size()))], Theory::Spek));
    d_.connect(p, {b, PortKind::Dom, 0});
    open_.push_back({b, PortKind::Cod, 0});
  }

  void merge() {
    if (open_.size() < 2) return grow_delta();
    const PortRef p = take_open();
    const PortRef q = take_open();
    const int b = box(GeneratorId::of(GenTag::DeltaDagger, Theory::Spek));
    d_.connect(p, {b, PortKind::Dom, 0});
    d_.connect(q, {b, PortKind::Dom, 1});
    open_.push_back({b, PortKind::Cod, 0});
  }

  void loop() {
    if (open_.size() < 2) return grow_perm();
    const PortRef p = take_open();
    const PortRef q = take_open();
    // Through a permutation half the time, so loops can carry a Σ.
    if (draw(2) == 0) {
      d_.connect(p, q);
    } else {
      const auto& perms = s4();
      const int b = box(GeneratorId::of_perm(perms[static_cast<std::size_t>(draw(perms.size()))], Theory::Spek));
      d_.connect(p, {b, PortKind::Dom, 0});
      d_.connect({b, PortKind::Cod, 0}, q);
    }
  }

  void cap() {
    if (open_.empty()) return;
    const PortRef p = take_open();
    const int b = box(GeneratorId::of(GenTag::Epsilon, Theory::Spek));
    d_.connect(p, {b, PortKind::Dom, 0});
  }

  std::mt19937_64 rng_;
  RandomDiagramOptions options_;
  Diagram d_;
  std::vector<PortRef> open_;
};

}  // namespace

Diagram random_spek_diagram(std::uint64_t seed, const RandomDiagramOptions& options) {
  return Grower(seed, options).run();
}

}  // namespace spek
