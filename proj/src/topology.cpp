#include "csma/topology.hpp"

#include <algorithm>
#include <stdexcept>

namespace csma {

std::string_view to_string(TopologyKind kind) {
  return kind == TopologyKind::Circle ? "circle" : "line";
}

TopologyKind parse_topology_kind(std::string_view text) {
  if (text == "circle") return TopologyKind::Circle;
  if (text == "line") return TopologyKind::Line;
  throw std::invalid_argument("unknown topology '" + std::string(text) + "'");
}

Topology::Topology(TopologyKind kind, int n) : kind_(kind), n_(n) {
  if (n < 1) throw std::invalid_argument("topology needs at least one node");
  adj_.resize(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    auto& nb = adj_[static_cast<std::size_t>(i - 1)];
    if (kind == TopologyKind::Line) {
      if (i > 1) nb.push_back(i - 1);
      if (i < n) nb.push_back(i + 1);
    } else if (n == 2) {
      nb.push_back(3 - i);
    } else if (n >= 3) {
      nb.push_back(i == 1 ? n : i - 1);
      nb.push_back(i == n ? 1 : i + 1);
    }
  }
  if (n <= 64) {
    masks_.resize(static_cast<std::size_t>(n), 0);
    for (int i = 1; i <= n; ++i)
      for (int j : adj_[static_cast<std::size_t>(i - 1)])
        masks_[static_cast<std::size_t>(i - 1)] |= std::uint64_t{1} << (j - 1);
  }
}

const std::vector<int>& Topology::neighbors(int i) const {
  if (i < 1 || i > n_)
    throw std::out_of_range("node " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  return adj_[static_cast<std::size_t>(i - 1)];
}

bool Topology::adjacent(int i, int j) const {
  const auto& nb = neighbors(i);
  return std::find(nb.begin(), nb.end(), j) != nb.end();
}

int Topology::wrap(long long i) const noexcept {
  long long r = (i - 1) % n_;
  if (r < 0) r += n_;
  return static_cast<int>(r) + 1;
}

std::string Topology::describe() const {
  return std::string(to_string(kind_)) + "(" + std::to_string(n_) + ")";
}

OccupancyState::OccupancyState(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw std::invalid_argument("occupancy bits must be 0 or 1");
  }
}

OccupancyState::OccupancyState(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("occupancy bits must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

OccupancyState OccupancyState::all(int n, bool occupied) {
  return OccupancyState(std::vector<std::uint8_t>(static_cast<std::size_t>(n), occupied ? 1 : 0));
}

OccupancyState OccupancyState::from_mask(int n, std::uint64_t mask) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
  return OccupancyState(std::move(bits));
}

OccupancyState OccupancyState::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ',' && c != ' ') {
      throw std::invalid_argument("bad occupancy character '" + std::string(1, c) + "'");
    }
  }
  if (bits.empty()) throw std::invalid_argument("empty occupancy state");
  return OccupancyState(std::move(bits));
}

int OccupancyState::count() const noexcept {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::uint64_t OccupancyState::mask() const {
  if (bits_.size() > 64) throw std::length_error("occupancy mask needs n <= 64");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) m |= std::uint64_t{1} << i;
  return m;
}

std::string OccupancyState::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

std::vector<Segment> segments(const Topology& t, const OccupancyState& s) {
  const int n = t.size();
  if (s.size() != n) throw std::invalid_argument("occupancy size does not match topology");
  std::vector<Segment> out;
  if (t.is_circle()) {
    if (s.count() == n) {
      out.push_back({1, n, true});
      return out;
    }
    // Start scanning right after an idle node so no run is split by the wrap.
    int idle = 1;
    while (s.occupied(idle)) ++idle;
    int run_start = 0;
    int run_len = 0;
    for (int step = 1; step <= n; ++step) {
      const int i = t.wrap(idle + step);
      if (s.occupied(i)) {
        if (run_len == 0) run_start = i;
        ++run_len;
      } else if (run_len > 0) {
        out.push_back({run_start, run_len, false});
        run_len = 0;
      }
    }
    std::sort(out.begin(), out.end(),
              [](const Segment& a, const Segment& b) { return a.start < b.start; });
    return out;
  }
  int i = 1;
  while (i <= n) {
    if (!s.occupied(i)) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 <= n && s.occupied(j + 1)) ++j;
    out.push_back({i, j - i + 1, false});
    i = j + 1;
  }
  return out;
}

std::vector<int> segment_nodes(const Topology& t, const Segment& seg) {
  std::vector<int> nodes;
  nodes.reserve(static_cast<std::size_t>(seg.len));
  for (int k = 0; k < seg.len; ++k) nodes.push_back(t.wrap(seg.start + k));
  return nodes;
}

}  // namespace csma
