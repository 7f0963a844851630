#pragma once

// Node index spaces and neighbour relations for circle and line networks.
// All node ids in this interface are 1-based.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace csma {

enum class TopologyKind { Circle, Line };

std::string_view to_string(TopologyKind kind);
TopologyKind parse_topology_kind(std::string_view text);

class Topology {
 public:
  Topology(TopologyKind kind, int n);

  static Topology circle(int n) { return {TopologyKind::Circle, n}; }
  static Topology line(int n) { return {TopologyKind::Line, n}; }

  TopologyKind kind() const noexcept { return kind_; }
  int size() const noexcept { return n_; }
  bool is_circle() const noexcept { return kind_ == TopologyKind::Circle; }

  /// Neighbours of node i, in the order the model lists them
  /// (left neighbour first). Throws std::out_of_range for i outside 1..n.
  const std::vector<int>& neighbors(int i) const;
  bool adjacent(int i, int j) const;

  /// Wraps an arbitrary integer onto 1..n (circle arithmetic). Valid for
  /// both kinds; callers on a line are responsible for range checks.
  int wrap(long long i) const noexcept;

  /// Bit masks of the neighbourhoods for n <= 64 (bit i-1 is node i).
  /// Empty for larger networks.
  const std::vector<std::uint64_t>& neighbor_masks() const noexcept { return masks_; }

  std::string describe() const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_;
  }

 private:
  TopologyKind kind_;
  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::uint64_t> masks_;
};

/// Which nodes have a non-empty queue at the start of a slot.
class OccupancyState {
 public:
  OccupancyState() = default;
  explicit OccupancyState(std::vector<std::uint8_t> bits);
  OccupancyState(std::initializer_list<int> bits);

  static OccupancyState all(int n, bool occupied);
  /// Bit i-1 of mask is node i.
  static OccupancyState from_mask(int n, std::uint64_t mask);
  /// Accepts "1101" or "1,1,0,1".
  static OccupancyState parse(std::string_view text);

  int size() const noexcept { return static_cast<int>(bits_.size()); }
  bool occupied(int i) const { return bits_.at(static_cast<std::size_t>(i - 1)) != 0; }
  void set(int i, bool v) { bits_.at(static_cast<std::size_t>(i - 1)) = v ? 1 : 0; }
  int count() const noexcept;
  std::uint64_t mask() const;

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::string to_string() const;

  friend bool operator==(const OccupancyState&, const OccupancyState&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Maximal run of occupied nodes. `full_circle` marks the all-occupied
/// circle, which has no idle border and is not a segment proper.
struct Segment {
  int start = 1;
  int len = 0;
  bool full_circle = false;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Maximal runs of occupied nodes ordered by start id. On a circle a run
/// may wrap through node n to node 1.
std::vector<Segment> segments(const Topology& t, const OccupancyState& s);

/// Node ids covered by a segment, in order from its start.
std::vector<int> segment_nodes(const Topology& t, const Segment& seg);

enum class Parity { Friend, Foe };

/// Friend iff |j - i| is even.
constexpr Parity friend_parity(int i, int j) noexcept {
  const int d = i > j ? i - j : j - i;
  return d % 2 == 0 ? Parity::Friend : Parity::Foe;
}

}  // namespace csma
