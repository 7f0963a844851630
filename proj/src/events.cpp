#include "csma/events.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace csma {

namespace {

void check_node(int i) {
  if (i < 1) throw std::invalid_argument("event node ids are 1-based, got " + std::to_string(i));
}

}  // namespace

EventPredicate EventPredicate::always() { return EventPredicate(std::make_shared<const Node>()); }

EventPredicate EventPredicate::transmits(int i) {
  check_node(i);
  return EventPredicate(std::make_shared<const Node>(Node{Op::Transmits, i, 1, nullptr, nullptr}));
}

EventPredicate EventPredicate::silent(int i) {
  check_node(i);
  return EventPredicate(std::make_shared<const Node>(Node{Op::Transmits, i, 0, nullptr, nullptr}));
}

EventPredicate EventPredicate::occupied(int i) {
  check_node(i);
  return EventPredicate(std::make_shared<const Node>(Node{Op::Occupied, i, 1, nullptr, nullptr}));
}

EventPredicate EventPredicate::idle(int i) {
  check_node(i);
  return EventPredicate(std::make_shared<const Node>(Node{Op::Occupied, i, 0, nullptr, nullptr}));
}

EventPredicate EventPredicate::rank_before(int i, int j) {
  check_node(i);
  check_node(j);
  if (i == j) throw std::invalid_argument("rank comparison needs two distinct nodes");
  return EventPredicate(std::make_shared<const Node>(Node{Op::RankBefore, i, j, nullptr, nullptr}));
}

EventPredicate EventPredicate::operator!() const {
  return EventPredicate(std::make_shared<const Node>(Node{Op::Not, 0, 0, node_, nullptr}));
}

EventPredicate operator&&(const EventPredicate& a, const EventPredicate& b) {
  using Node = EventPredicate::Node;
  return EventPredicate(std::make_shared<const Node>(Node{EventPredicate::Op::And, 0, 0, a.node_, b.node_}));
}

EventPredicate operator||(const EventPredicate& a, const EventPredicate& b) {
  using Node = EventPredicate::Node;
  return EventPredicate(std::make_shared<const Node>(Node{EventPredicate::Op::Or, 0, 0, a.node_, b.node_}));
}

bool EventPredicate::eval(const Node& n, const SlotOutcome& o) {
  switch (n.op) {
    case Op::True:
      return true;
    case Op::Transmits:
      return o.d[static_cast<std::size_t>(n.a - 1)] == n.b;
    case Op::Occupied:
      return o.s[static_cast<std::size_t>(n.a - 1)] == n.b;
    case Op::RankBefore:
      return o.u[static_cast<std::size_t>(n.a - 1)] < o.u[static_cast<std::size_t>(n.b - 1)];
    case Op::Not:
      return !eval(*n.left, o);
    case Op::And:
      return eval(*n.left, o) && eval(*n.right, o);
    case Op::Or:
      return eval(*n.left, o) || eval(*n.right, o);
  }
  return false;
}

bool EventPredicate::occupancy_only(const Node& n) noexcept {
  switch (n.op) {
    case Op::True:
    case Op::Occupied:
      return true;
    case Op::Transmits:
    case Op::RankBefore:
      return false;
    case Op::Not:
      return occupancy_only(*n.left);
    case Op::And:
    case Op::Or:
      return occupancy_only(*n.left) && occupancy_only(*n.right);
  }
  return false;
}

bool EventPredicate::uses_ranks(const Node& n) noexcept {
  switch (n.op) {
    case Op::RankBefore:
      return true;
    case Op::Not:
      return uses_ranks(*n.left);
    case Op::And:
    case Op::Or:
      return uses_ranks(*n.left) || uses_ranks(*n.right);
    default:
      return false;
  }
}

int EventPredicate::max_node(const Node& n) noexcept {
  switch (n.op) {
    case Op::True:
      return 0;
    case Op::Transmits:
    case Op::Occupied:
      return n.a;
    case Op::RankBefore:
      return std::max(n.a, n.b);
    case Op::Not:
      return max_node(*n.left);
    case Op::And:
    case Op::Or:
      return std::max(max_node(*n.left), max_node(*n.right));
  }
  return 0;
}

std::string EventPredicate::render(const Node& n) {
  switch (n.op) {
    case Op::True:
      return "true";
    case Op::Transmits:
      return "d" + std::to_string(n.a) + "=" + std::to_string(n.b);
    case Op::Occupied:
      return "s" + std::to_string(n.a) + "=" + std::to_string(n.b);
    case Op::RankBefore:
      return "u" + std::to_string(n.a) + "<u" + std::to_string(n.b);
    case Op::Not:
      return "!(" + render(*n.left) + ")";
    case Op::And:
      return "(" + render(*n.left) + "&" + render(*n.right) + ")";
    case Op::Or:
      return "(" + render(*n.left) + "|" + render(*n.right) + ")";
  }
  return "?";
}

class EventParser {
 public:
  explicit EventParser(std::string_view text) : text_(text) {}

  EventPredicate parse_all() {
    EventPredicate e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  EventPredicate expr() {
    EventPredicate e = term();
    while (accept('|')) e = e || term();
    return e;
  }

  EventPredicate term() {
    EventPredicate e = factor();
    while (accept('&') || accept(',')) e = e && factor();
    return e;
  }

  EventPredicate factor() {
    if (accept('!')) return !factor();
    if (accept('(')) {
      EventPredicate e = expr();
      if (!accept(')')) fail("missing ')'");
      return e;
    }
    return atom();
  }

  EventPredicate atom() {
    skip_space();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return EventPredicate::always();
    }
    if (pos_ >= text_.size()) fail("expected an atom");
    const char kind = text_[pos_++];
    const int i = number();
    if (kind == 'd' || kind == 's') {
      if (!accept('=')) fail("expected '='");
      const int v = number();
      if (v != 0 && v != 1) fail("atom value must be 0 or 1");
      if (kind == 'd') return v ? EventPredicate::transmits(i) : EventPredicate::silent(i);
      return v ? EventPredicate::occupied(i) : EventPredicate::idle(i);
    }
    if (kind == 'u') {
      bool less = false;
      if (accept('<')) {
        less = true;
      } else if (!accept('>')) {
        fail("expected '<' or '>'");
      }
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != 'u') fail("expected 'u' on right of comparison");
      ++pos_;
      const int j = number();
      return less ? EventPredicate::rank_before(i, j) : EventPredicate::rank_before(j, i);
    }
    fail(std::string("unknown atom kind '") + kind + "'");
  }

  int number() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("event '" + std::string(text_) + "' at " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

EventPredicate EventPredicate::parse(std::string_view text) { return EventParser(text).parse_all(); }

}  // namespace csma
