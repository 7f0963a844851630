#pragma once

// Events over one slot outcome (s, u, d): a small algebra of atoms
// (node transmits, node occupied, rank comparison) closed under
// conjunction, disjunction and negation.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csma {

/// Borrowed view of one slot outcome. Index i-1 holds node i.
struct SlotOutcome {
  std::span<const std::uint8_t> s;
  std::span<const std::uint32_t> u;
  std::span<const std::uint8_t> d;
};

class EventPredicate {
 public:
  enum class Op { True, Transmits, Occupied, RankBefore, Not, And, Or };

  static EventPredicate always();
  static EventPredicate transmits(int i);
  static EventPredicate silent(int i);
  static EventPredicate occupied(int i);
  static EventPredicate idle(int i);
  /// u_i < u_j: node i gets the earlier (higher) priority.
  static EventPredicate rank_before(int i, int j);

  /// Grammar: expr := term ('|' term)*; term := factor (('&' | ',') factor)*;
  /// factor := '!' factor | '(' expr ')' | atom; atom := 'true' | 'd'N'='B |
  /// 's'N'='B | 'u'N'<u'M | 'u'N'>u'M. Throws std::invalid_argument.
  static EventPredicate parse(std::string_view text);

  EventPredicate operator!() const;
  friend EventPredicate operator&&(const EventPredicate& a, const EventPredicate& b);
  friend EventPredicate operator||(const EventPredicate& a, const EventPredicate& b);

  bool operator()(const SlotOutcome& o) const { return eval(*node_, o); }

  /// Whether the event only looks at s (usable as a state filter).
  bool occupancy_only() const noexcept { return occupancy_only(*node_); }
  bool uses_ranks() const noexcept { return uses_ranks(*node_); }
  /// Largest node id referenced (0 for constant events).
  int max_node() const noexcept { return max_node(*node_); }

  std::string to_string() const { return render(*node_); }

 private:
  struct Node {
    Op op = Op::True;
    int a = 0;
    int b = 0;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  explicit EventPredicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static bool eval(const Node& n, const SlotOutcome& o);
  static bool occupancy_only(const Node& n) noexcept;
  static bool uses_ranks(const Node& n) noexcept;
  static int max_node(const Node& n) noexcept;
  static std::string render(const Node& n);

  std::shared_ptr<const Node> node_;

  friend class EventParser;
};

}  // namespace csma
