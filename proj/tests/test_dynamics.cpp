#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "treewalk/dynamics.hpp"
#include "treewalk/hamiltonian.hpp"

using namespace treewalk;

TEST_SUITE("dynamics") {
  TEST_CASE("hitting time and time grid") {
    CHECK(hitting_time(15) == doctest::Approx(11.86).epsilon(1e-3));
    CHECK(hitting_time(15, 2.0) == doctest::Approx(hitting_time(15) / 2));
    const auto g = uniform_grid(3.0, 4);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(3.0));
    CHECK(hit_decay_prediction(5, 0.0, 0.7) == doctest::Approx(0.7));
    CHECK(hit_decay_prediction(5, 2.0, 1.0) == doctest::Approx(std::exp(-4.5 * 4.0 / 16)));
  }

  TEST_CASE("clean full walk equals column walk") {
    for (int d : {3, 6}) {
      const Graph g = build_sgt(d);
      const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
      const auto ts = uniform_grid(3 * hitting_time(d), 60);
      const WalkSeries full = walk_series(g, eps, ts);
      const WalkSeries col = column_walk_series(d, Variant::SGT, ts);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(std::abs(full.p_hit[i] - col.p_hit[i]) < 1e-7);
        CHECK(std::abs(full.depth[i] - col.depth[i]) < 1e-7);
        CHECK(std::abs(full.p_col[i] - 1.0) < 1e-7);
      }
    }
  }

  TEST_CASE("disordered walk bounds") {
    const Graph g = build_sgt(5);
    const auto eps = sample_disorder({1.5, 2, 0, g.size()});
    const auto ts = uniform_grid(20.0, 40);
    const WalkSeries s = walk_series(g, eps, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(s.p_hit[i] <= s.p_col[i] + 1e-12);
      CHECK(s.p_col[i] <= 1.0 + 1e-10);
      CHECK(s.depth[i] >= -1e-12);
      CHECK(s.depth[i] <= 10.0 + 1e-10);
    }
    CHECK(s.p_col[0] == doctest::Approx(1.0));
  }

  TEST_CASE("clean peak sits near the hitting time") {
    const auto [t, p] = clean_hit_peak(8);
    CHECK(std::abs(t - hitting_time(8)) < 0.2 * hitting_time(8));
    CHECK((p > 0.3 && p <= 1.0));
  }

  TEST_CASE("ensemble is independent of worker count") {
    WalkEnsembleOptions opt;
    opt.depth = 4;
    opt.width = 1.0;
    opt.realizations = 5;
    opt.seed = 3;
    opt.times = uniform_grid(10.0, 11);
    opt.workers = 1;
    const WalkEnsemble a = walk_ensemble(opt);
    opt.workers = 4;
    const WalkEnsemble b = walk_ensemble(opt);
    CHECK(a.p_hit.mean == b.p_hit.mean);
    CHECK(a.depth.stddev == b.depth.stddev);
  }

  TEST_CASE("max depth grows then saturates") {
    MaxDepthOptions opt;
    opt.depths = {3};
    opt.widths = {0.0, 20.0};
    opt.realizations = {3};
    opt.seed = 1;
    opt.time_points = 100;
    const auto rows = max_depth_sweep(opt);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].mean > rows[1].mean);
    CHECK(rows[0].stddev == doctest::Approx(0.0));
  }
}
