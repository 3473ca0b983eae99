#include <cmath>
#include <numbers>

#include "doctest.h"
#include "treewalk/graph.hpp"
#include "treewalk/hamiltonian.hpp"
#include "treewalk/scattering.hpp"

using namespace treewalk;

TEST_SUITE("scattering") {
  TEST_CASE("clean amplitude at half pi") {
    for (int d = 1; d <= 8; ++d)
      CHECK(analytic_t_halfpi(d, Variant::MGTRegular) == doctest::Approx(8.0 / (9.0 + (d % 2 ? -1.0 : 1.0))));
    CHECK(analytic_t_halfpi(3, Variant::MGTRegular) == doctest::Approx(1.0));
    CHECK(analytic_t_halfpi(4, Variant::MGTRegular) == doctest::Approx(0.8));
    for (int d = 3; d <= 8; ++d) {
      for (Variant v : {Variant::MGTRegular, Variant::SGT}) {
        const Graph g = build_graph(d, v);
        const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
        const Transmission t = transmission(g, eps, std::numbers::pi / 2);
        CHECK(std::abs(std::abs(t.amplitude) - analytic_t_halfpi(d, v)) < 1e-8);
        CHECK(std::abs(t.probability() + t.reflectance() - 1.0) < 1e-9);
      }
    }
  }

  TEST_CASE("clean flux conservation across momenta") {
    const Graph g = build_mgt_random(5, 4);
    const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
    for (int i = 1; i < 50; ++i) {
      const Transmission t = transmission(g, eps, std::numbers::pi * i / 50);
      CHECK(std::abs(t.probability() + t.reflectance() - 1.0) < 1e-9);
    }
  }

  TEST_CASE("resolvent agrees with the column ansatz") {
    for (Variant v : {Variant::MGTRegular, Variant::SGT}) {
      const Graph g = build_graph(4, v);
      const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
      for (double k : {0.3, 1.1, 2.0, 2.9}) {
        const Transmission a = transmission(g, eps, k);
        const Transmission b = clean_transmission_general_k(4, v, k);
        CHECK(std::abs(a.amplitude - b.amplitude) < 1e-8);
        CHECK(std::abs(a.reflection - b.reflection) < 1e-8);
      }
    }
  }

  TEST_CASE("disorder keeps flux and lowers transmission") {
    const Graph g = build_mgt_random(6, 2);
    const auto eps = sample_disorder({4.0, 8, 0, g.size()});
    const Transmission t = transmission(g, eps, std::numbers::pi / 2);
    CHECK(std::abs(t.probability() + t.reflectance() - 1.0) < 1e-9);
    CHECK(t.probability() < analytic_t_halfpi(6, Variant::MGTRegular));
  }

  TEST_CASE("classical overlay and fit") {
    const std::vector<double> w = {0.0, 2.0, 4.0, 6.0};
    const auto y = classical_fit_overlay(w);
    CHECK(y[0] == doctest::Approx(0.8));
    CHECK(y[1] == doctest::Approx(0.4444444444));
    const auto [t0, c] = fit_classical_form(w, y, {});
    CHECK(t0 == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(c == doctest::Approx(0.2).epsilon(1e-6));
  }

  TEST_CASE("sweep is deterministic") {
    TransmissionSweepOptions opt;
    opt.depth = 3;
    opt.momenta = {std::numbers::pi / 2, 1.0};
    opt.widths = {0.0, 2.0};
    opt.realizations = 6;
    opt.seed = 5;
    opt.workers = 1;
    const auto a = transmission_sweep(opt);
    opt.workers = 3;
    const auto b = transmission_sweep(opt);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].mean == b[i].mean);
  }
}
