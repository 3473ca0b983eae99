#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "treewalk/graph.hpp"

using namespace treewalk;

TEST_SUITE("graph") {
  TEST_CASE("column sizes") {
    CHECK(column_size(0, 4, Variant::SGT) == 1);
    CHECK(column_size(4, 4, Variant::SGT) == 16);
    CHECK(column_size(5, 4, Variant::SGT) == 8);
    CHECK(column_size(5, 4, Variant::MGTRegular) == 16);
    CHECK(column_size(9, 4, Variant::MGTRegular) == 1);
    CHECK_THROWS_AS(column_size(9, 4, Variant::SGT), std::domain_error);
    CHECK_THROWS_AS(column_size(-1, 4, Variant::SGT), std::domain_error);
    CHECK(column_count(4, Variant::SGT) == 9);
    CHECK(column_count(4, Variant::MGTRandom) == 10);
  }

  TEST_CASE("vertex counts match brute-force construction") {
    for (int d = 1; d <= 8; ++d) {
      CHECK(build_sgt(d).size() == 3 * (1 << d) - 2);
      CHECK(build_mgt_regular(d).size() == (1 << (d + 2)) - 2);
      CHECK(vertex_count(d, Variant::SGT) == 3 * (1 << d) - 2);
    }
  }

  TEST_CASE("coordinate labels") {
    CHECK(coord_to_vertex({0, 0}, 4) == 1);
    // last column of d = 4: 3*16 - 2^(9-8) + 0 = 46 = N
    CHECK(coord_to_vertex({8, 0}, 4) == 46);
    for (int d = 1; d <= 6; ++d) {
      std::set<std::int64_t> seen;
      for (int j = 0; j <= 2 * d; ++j)
        for (std::int64_t n = 0; n < column_size(j, d, Variant::SGT); ++n) {
          const auto v = coord_to_vertex({j, n}, d);
          CHECK(vertex_to_coord(v, d) == Coord{j, n});
          seen.insert(v);
        }
      CHECK(*seen.begin() == 1);
      CHECK(*seen.rbegin() == 3 * (1 << d) - 2);
      CHECK(seen.size() == static_cast<std::size_t>(3 * (1 << d) - 2));
    }
    CHECK_THROWS_AS(coord_to_vertex({2, 4}, 4), std::domain_error);
  }

  TEST_CASE("sgt structure") {
    const Graph g1 = build_sgt(1);
    CHECK(g1.size() == 4);
    CHECK(g1.edge_count() == 4);
    for (std::int64_t v = 0; v < 4; ++v) CHECK(g1.neighbors(v).size() == 2);

    const Graph g4 = build_sgt(4);
    CHECK(g4.size() == 46);
    CHECK(g4.edge_count() == 60);
    CHECK_NOTHROW(check_invariants(g4));
    for (std::int64_t v = 0; v < g4.size(); ++v) {
      const int j = g4.column_of(v);
      const std::size_t expected = (j == 0 || j == 8 || j == 4) ? 2 : 3;
      CHECK(g4.neighbors(v).size() == expected);
    }
  }

  TEST_CASE("mgt structure") {
    const Graph g = build_mgt_regular(1);
    CHECK(g.size() == 6);
    CHECK(g.edge_count() == 8);
    // leaves 1,2 (left) and 3,4 (right) form a 4-cycle of cross edges
    int cross = 0;
    for (std::int64_t v = 1; v <= 2; ++v)
      for (auto u : g.neighbors(v)) cross += g.column_of(u) == 2;
    CHECK(cross == 4);
    for (int d = 1; d <= 7; ++d)
      for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
        const Graph r = build_mgt_random(d, seed);
        CHECK_NOTHROW(check_invariants(r));
        for (std::int64_t v = r.column_offset(d); v < r.column_offset(d + 2); ++v) {
          int x = 0;
          for (auto u : r.neighbors(v)) x += std::abs(r.column_of(u) - r.column_of(v)) == 1 &&
                                            (r.column_of(u) == d || r.column_of(u) == d + 1) &&
                                            r.column_of(u) != r.column_of(v);
          CHECK(x == 2);
        }
      }
  }

  TEST_CASE("random gluing is deterministic and seed dependent") {
    std::ostringstream a, b, c;
    write_edge_list(a, build_mgt_random(5, 7));
    write_edge_list(b, build_mgt_random(5, 7));
    write_edge_list(c, build_mgt_random(5, 8));
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
    CHECK(a.str().rfind("# {", 0) == 0);
  }

  TEST_CASE("column states") {
    const Graph g = build_sgt(2);
    auto s0 = column_state(g, 0);
    CHECK(s0[0] == doctest::Approx(1.0));
    auto s2 = column_state(g, 2);
    double norm = 0;
    int support = 0;
    for (std::size_t v = 0; v < s2.size(); ++v) {
      norm += s2[v] * s2[v];
      if (s2[v] != 0.0) {
        ++support;
        CHECK(s2[v] == doctest::Approx(0.5));
        CHECK(g.column_of(static_cast<std::int64_t>(v)) == 2);
      }
    }
    CHECK(support == 4);
    CHECK(norm == doctest::Approx(1.0));
    CHECK_THROWS_AS(column_state(g, 5), std::domain_error);
  }
}
