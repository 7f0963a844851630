#include "csma/topology.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

using namespace csma;

namespace {

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Topology, CircleNeighbours) {
  const auto t = Topology::circle(5);
  EXPECT_EQ(as_set(t.neighbors(1)), (std::set<int>{5, 2}));
  EXPECT_EQ(as_set(t.neighbors(3)), (std::set<int>{2, 4}));
  EXPECT_EQ(as_set(t.neighbors(5)), (std::set<int>{4, 1}));
}

TEST(Topology, LineNeighbours) {
  const auto t = Topology::line(5);
  EXPECT_EQ(as_set(t.neighbors(1)), (std::set<int>{2}));
  EXPECT_EQ(as_set(t.neighbors(3)), (std::set<int>{2, 4}));
  EXPECT_EQ(as_set(t.neighbors(5)), (std::set<int>{4}));
}

TEST(Topology, DegenerateSizes) {
  EXPECT_TRUE(Topology::circle(1).neighbors(1).empty());
  EXPECT_TRUE(Topology::line(1).neighbors(1).empty());
  EXPECT_EQ(Topology::circle(2).neighbors(1), std::vector<int>{2});
  EXPECT_EQ(Topology::circle(2).neighbors(2), std::vector<int>{1});
  EXPECT_EQ(Topology::line(2).neighbors(2), std::vector<int>{1});
  EXPECT_THROW(Topology::circle(0), std::invalid_argument);
}

TEST(Topology, OutOfRangeNode) {
  const auto t = Topology::line(4);
  EXPECT_THROW((void)t.neighbors(0), std::out_of_range);
  EXPECT_THROW((void)t.neighbors(5), std::out_of_range);
}

TEST(Topology, NeighbourRelationIsSymmetric) {
  for (int n = 1; n <= 12; ++n) {
    for (auto t : {Topology::circle(n), Topology::line(n)}) {
      for (int i = 1; i <= n; ++i) {
        for (int j : t.neighbors(i)) {
          const auto& back = t.neighbors(j);
          EXPECT_NE(std::find(back.begin(), back.end(), i), back.end()) << t.describe() << " " << i << "," << j;
          EXPECT_TRUE(t.adjacent(i, j));
        }
      }
    }
  }
}

TEST(Topology, CircleIsRotationInvariant) {
  for (int n = 3; n <= 10; ++n) {
    const auto t = Topology::circle(n);
    for (int r = 1; r < n; ++r) {
      for (int i = 1; i <= n; ++i) {
        std::set<int> rotated;
        for (int j : t.neighbors(i)) rotated.insert(t.wrap(j + r));
        EXPECT_EQ(rotated, as_set(t.neighbors(t.wrap(i + r))));
      }
    }
  }
}

TEST(Topology, ParseKind) {
  EXPECT_EQ(parse_topology_kind("circle"), TopologyKind::Circle);
  EXPECT_EQ(parse_topology_kind("line"), TopologyKind::Line);
  EXPECT_THROW(parse_topology_kind("ring"), std::invalid_argument);
}

TEST(Occupancy, ParseForms) {
  EXPECT_EQ(OccupancyState::parse("1101"), (OccupancyState{1, 1, 0, 1}));
  EXPECT_EQ(OccupancyState::parse("1,1,0,1"), (OccupancyState{1, 1, 0, 1}));
  EXPECT_EQ(OccupancyState::from_mask(4, 0b1011), (OccupancyState{1, 1, 0, 1}));
  EXPECT_EQ(OccupancyState::parse("1101").to_string(), "1101");
  EXPECT_THROW(OccupancyState::parse("12"), std::invalid_argument);
}

TEST(Segments, LineRuns) {
  const auto segs = segments(Topology::line(5), OccupancyState{1, 1, 0, 1, 1});
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0], (Segment{1, 2, false}));
  EXPECT_EQ(segs[1], (Segment{4, 2, false}));
}

TEST(Segments, CircleRunWraps) {
  const auto t = Topology::circle(4);
  const auto segs = segments(t, OccupancyState{1, 0, 1, 1});
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0], (Segment{3, 3, false}));
  EXPECT_EQ(segment_nodes(t, segs[0]), (std::vector<int>{3, 4, 1}));
}

TEST(Segments, FullCircleIsFlagged) {
  const auto segs = segments(Topology::circle(4), OccupancyState::all(4, true));
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_TRUE(segs[0].full_circle);
  EXPECT_EQ(segs[0].len, 4);
  // A full line is an ordinary segment.
  const auto line = segments(Topology::line(4), OccupancyState::all(4, true));
  ASSERT_EQ(line.size(), 1u);
  EXPECT_FALSE(line[0].full_circle);
}

TEST(Segments, CoverOccupiedNodesDisjointly) {
  for (int n = 1; n <= 10; ++n) {
    for (auto t : {Topology::circle(n), Topology::line(n)}) {
      for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
        const auto s = OccupancyState::from_mask(n, mask);
        std::vector<int> seen(static_cast<std::size_t>(n + 1), 0);
        const auto segs = segments(t, s);
        for (const auto& seg : segs) {
          for (int i : segment_nodes(t, seg)) {
            EXPECT_TRUE(s.occupied(i));
            ++seen[static_cast<std::size_t>(i)];
          }
        }
        for (int i = 1; i <= n; ++i) EXPECT_EQ(seen[static_cast<std::size_t>(i)], s.occupied(i) ? 1 : 0);
        // Distinct segments are never adjacent.
        for (std::size_t a = 0; a < segs.size(); ++a)
          for (std::size_t b = a + 1; b < segs.size(); ++b)
            for (int i : segment_nodes(t, segs[a]))
              for (int j : segment_nodes(t, segs[b])) EXPECT_FALSE(t.adjacent(i, j));
      }
    }
  }
}

TEST(FriendParity, Distances) {
  EXPECT_EQ(friend_parity(2, 4), Parity::Friend);
  EXPECT_EQ(friend_parity(2, 3), Parity::Foe);
  EXPECT_EQ(friend_parity(5, 5), Parity::Friend);
  EXPECT_EQ(friend_parity(7, 2), Parity::Foe);
}
