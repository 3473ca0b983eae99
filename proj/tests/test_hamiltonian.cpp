#include <cmath>
#include <numbers>

#include "doctest.h"
#include "treewalk/hamiltonian.hpp"
#include "treewalk/numerics.hpp"

using namespace treewalk;

TEST_SUITE("hamiltonian") {
  TEST_CASE("4-cycle spectrum") {
    const Eigen::VectorXd ev = eigvalsh(assemble_h0(build_sgt(1)).dense());
    REQUIRE(ev.size() == 4);
    CHECK(ev[0] == doctest::Approx(-2.0));
    CHECK(std::abs(ev[1]) < 1e-12);
    CHECK(std::abs(ev[2]) < 1e-12);
    CHECK(ev[3] == doctest::Approx(2.0));
  }

  TEST_CASE("h0 is -gamma A") {
    const Graph g = build_mgt_random(4, 3);
    const Eigen::MatrixXd h = assemble_h0(g, 0.7).dense();
    CHECK((h - h.transpose()).norm() == 0.0);
    for (std::int64_t v = 0; v < g.size(); ++v) {
      CHECK(h(v, v) == 0.0);
      CHECK(-h.row(v).sum() / 0.7 == doctest::Approx(static_cast<double>(g.neighbors(v).size())));
    }
  }

  TEST_CASE("disorder samples") {
    const auto zero = sample_disorder({0.0, 5, 0, 100});
    for (double x : zero) CHECK(x == 0.0);
    const auto a = sample_disorder({1.0, 5, 3, 1000000});
    CHECK(a == sample_disorder({1.0, 5, 3, 1000000}));
    CHECK(a != sample_disorder({1.0, 5, 4, 1000000}));
    double m = 0, m2 = 0;
    for (double x : a) {
      CHECK(std::abs(x) <= 0.5);
      m += x, m2 += x * x;
    }
    m /= static_cast<double>(a.size());
    const double var = m2 / static_cast<double>(a.size()) - m * m;
    CHECK(std::abs(var - 1.0 / 12.0) < 1e-3);
  }

  TEST_CASE("disordered assembly") {
    const Graph g = build_sgt(3);
    const auto eps = sample_disorder({2.0, 1, 0, g.size()});
    const Eigen::MatrixXd h = assemble_h(g, 1.0, eps).dense();
    const Eigen::MatrixXd h0 = assemble_h0(g).dense();
    for (std::int64_t v = 0; v < g.size(); ++v) CHECK(h(v, v) == eps[static_cast<std::size_t>(v)]);
    Eigen::MatrixXd off = h;
    off.diagonal().setZero();
    CHECK((off - h0).norm() == 0.0);
    // Weyl: eigenvalues move by at most W/2
    CHECK((eigvalsh(h) - eigvalsh(h0)).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    CHECK_THROWS_AS(assemble_h(g, 1.0, std::vector<double>(3, 0.0)), std::domain_error);
  }

  TEST_CASE("column hamiltonian and projection") {
    const Eigen::MatrixXd c1 = column_hamiltonian(1, Variant::SGT);
    CHECK(c1.rows() == 3);
    CHECK(c1(0, 1) == doctest::Approx(-std::numbers::sqrt2));
    CHECK(c1(1, 2) == doctest::Approx(-std::numbers::sqrt2));
    for (int d = 1; d <= 6; ++d) {
      const Graph s = build_sgt(d);
      CHECK((project_to_columns(s, assemble_h0(s)) - column_hamiltonian(d, Variant::SGT)).cwiseAbs().maxCoeff() <
            1e-12);
      const Graph m = build_mgt_random(d, 11);
      const Eigen::MatrixXd pm = project_to_columns(m, assemble_h0(m));
      CHECK((pm - column_hamiltonian(d, Variant::MGTRandom)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(pm(d, d + 1) == doctest::Approx(-2.0));
    }
    // column energies of the reduced SGT operator
    const int d = 4;
    const Eigen::VectorXd ev = eigvalsh(column_hamiltonian(d, Variant::SGT));
    for (int k = 1; k <= 2 * d + 1; ++k)
      CHECK(ev[k - 1] == doctest::Approx(-2 * std::numbers::sqrt2 * std::cos(k * std::numbers::pi / (2 * (d + 1)))));
  }

  TEST_CASE("scattering boundary term") {
    const Graph g = build_mgt_regular(3);
    const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
    const double k = std::numbers::pi / 2;
    const auto sh = scattering_hamiltonian(g, eps, k);
    const Eigen::MatrixXcd m(sh.matrix);
    CHECK(std::abs(m(sh.left, sh.left) - cdouble(0, -1)) < 1e-15);
    CHECK(std::abs(m(sh.right, sh.right) - cdouble(0, -1)) < 1e-15);
    Eigen::MatrixXcd base = m;
    base(sh.left, sh.left) += std::polar(1.0, k);
    base(sh.right, sh.right) += std::polar(1.0, k);
    CHECK((base - Eigen::MatrixXcd(assemble_h0(g).dense().cast<cdouble>())).norm() < 1e-15);
    CHECK_THROWS_AS(scattering_hamiltonian(g, eps, 0.0), std::domain_error);
    CHECK_THROWS_AS(scattering_hamiltonian(g, eps, 3.5), std::domain_error);
  }
}
