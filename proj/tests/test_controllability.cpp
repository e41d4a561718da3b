#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "so42/controllability.hpp"
#include "so42/errors.hpp"
#include "so42/simulator.hpp"

using namespace so42;
using namespace so42::control;
using G = GeneratorId;

namespace {

const rep::RepSet& rep4()
{
  static const rep::RepSet r = rep::build_rep(4);
  return r;
}

ControlSystem sys_of(std::vector<G> ids, bool time_dependent = true) { return make_system(rep4(), ids, time_dependent); }

ControlSystem full() { return sys_of(parse_control_list("all")); }

Eigen::VectorXcd ground() { return sim::basis_vector(4, {1, 0, 0}); }

} // namespace

TEST_SUITE("controllability")
{
  TEST_CASE("system construction")
  {
    const auto s = sys_of({G::L3, G::C});
    CHECK(s.dim() == 30);
    CHECK(s.controls.size() == 2);
    CHECK(s.has_control(G::C));
    CHECK_FALSE(s.has_control(G::S));
    CHECK(s.drift.tag() == rep::SymmetryTag::SkewHermitian);
    CHECK_THROWS_AS(sys_of({G::L3, G::L3}), std::invalid_argument);
    auto bad = s;
    bad.controls[0].matrix = rep::OperatorMatrix::skew_hermitian(Eigen::MatrixXcd::Zero(3, 3));
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("control lists")
  {
    CHECK(parse_control_list("L1,L2,A3,S,C") == reduced_controls());
    CHECK(parse_control_list("all").size() == 15);
    CHECK(parse_control_list("").empty());
    CHECK_THROWS_AS(parse_control_list("L1,Q"), std::invalid_argument);
    CHECK_THROWS_AS(parse_control_list("L1,l1"), std::invalid_argument);
  }

  TEST_CASE("Lie span of the controls")
  {
    CHECK(lie_span_controls(full()).abstract.dim == 15);
    const auto red = lie_span_controls(sys_of(reduced_controls()));
    CHECK(red.abstract.dim == 15);
    CHECK(red.matrices.size() == 15);
    CHECK(lie_span_controls(sys_of({G::L3})).abstract.dim == 1);
    CHECK_THROWS_AS(lie_span_controls(sys_of({})), std::invalid_argument);
  }

  TEST_CASE("B1 residual")
  {
    CHECK(b1_residual(full(), 0.7, 1e-5) < 1e-6);
    CHECK(b1_residual(sys_of({G::L3, G::D}), 0.7, 1e-5) < 1e-12);
    CHECK(b1_residual(sys_of({G::L3, G::D}), 3.1, 1e-5) < 1e-12);
    CHECK_THROWS_AS(b1_residual(full(), 0.7, 0.0), std::invalid_argument);
    // Constant (non-evolving) controls that do not commute with H violate it.
    CHECK(b1_residual(sys_of({G::C}, false), 0.7, 1e-5) > 1e-3);
  }

  TEST_CASE("B1 residual converges quadratically in h")
  {
    const auto s = sys_of({G::S});
    const double e1 = b1_residual(s, 0.7, 0.4);
    const double e2 = b1_residual(s, 0.7, 0.2);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("ideal condition")
  {
    CHECK(check_ideal_condition(full()));
    CHECK(check_ideal_condition(sys_of(reduced_controls())));
    CHECK(check_ideal_condition(sys_of({G::L1, G::L2, G::L3})));
    CHECK(check_ideal_condition(sys_of({G::L1, G::L2, G::L3}, false)));
    // Constant C: C = L(C', [H', C'], ...) is not normalized by span{C'}.
    CHECK_FALSE(check_ideal_condition(sys_of({G::C}, false)));
  }

  TEST_CASE("so(3) ideal condition by matrix brute force")
  {
    // Least-squares oracle: every [L'_i, L'_j] lies in span{L'_1, L'_2, L'_3}.
    const auto s = sys_of({G::L1, G::L2, G::L3});
    Eigen::MatrixXcd basis(30 * 30, 3);
    for (int i = 0; i < 3; ++i) basis.col(i) = s.realization[static_cast<std::size_t>(i)].reshaped();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const auto& a = s.realization[static_cast<std::size_t>(i)];
        const auto& b = s.realization[static_cast<std::size_t>(j)];
        const Eigen::VectorXcd v = (a * b - b * a).reshaped();
        const Eigen::VectorXcd c = basis.colPivHouseholderQr().solve(v);
        CHECK((basis * c - v).norm() < 1e-10);
      }
  }

  TEST_CASE("orbit dimension examples")
  {
    CHECK(orbit_dimension(sys_of({G::L3}), ground()) == 0);
    CHECK(orbit_dimension(sys_of({G::L1, G::L2, G::L3}), ground()) == 0);
    CHECK(orbit_dimension(sys_of({}), ground()) == 0);
    // D'|100> = -i|100> spans one real direction.
    CHECK(orbit_dimension(sys_of({G::D}), ground()) == 1);
    const int m = orbit_dimension(full(), ground());
    CHECK(m == 9);
    CHECK(orbit_dimension(sys_of(reduced_controls()), ground()) == m);
    CHECK_THROWS_AS(orbit_dimension(full(), 2.0 * ground()), std::invalid_argument);
  }

  TEST_CASE("orbit dimension is constant over random orbit probes")
  {
    const auto s = full();
    const int m = orbit_dimension(s, ground());
    const auto probes = orbit_probes(s, ground(), 20, 42);
    REQUIRE(probes.size() == 20);
    for (const auto& p : probes) {
      const auto r = orbit_rank(s, p);
      CHECK(r.rank == m);
      CHECK(r.gap >= 1e3);
      CHECK(p.head(static_cast<Eigen::Index>(s.interior_dim)).squaredNorm() >= 0.99);
    }
  }

  TEST_CASE("orbit dimension is invariant under drift motion and the group action")
  {
    const auto s = full();
    const auto psi = orbit_probes(s, ground(), 1, 3).front();
    const int m = orbit_dimension(s, psi);
    const Eigen::VectorXcd d = s.drift.entries().diagonal();
    for (double t : {0.3, 1.7, 5.0}) {
      const Eigen::VectorXcd moved = (d * t).array().exp().matrix().cwiseProduct(psi);
      CHECK(orbit_dimension(s, moved, kRankGapRatio, t) == m);
    }
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    const auto basis = c_basis(s);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(30, 30);
      for (const auto& b : basis) k += u(rng) * b;
      const Eigen::VectorXcd phi = sim::matrix_exponential(rep::OperatorMatrix::skew_hermitian(k)).entries() * psi;
      CHECK(orbit_dimension(s, phi) == m);
    }
  }

  TEST_CASE("orbit dimension is monotone under span inclusion")
  {
    const int m = orbit_dimension(full(), ground());
    for (const std::vector<G>& sub : std::vector<std::vector<G>>{{G::L3}, {G::D}, {G::S, G::C}, {G::A1, G::A2}, {G::B3}})
      CHECK(orbit_dimension(sys_of(sub), ground()) <= m);
  }

  TEST_CASE("rank ambiguity is reported, not guessed")
  {
    // A threshold above the largest gap but below the total spread cannot be resolved.
    const auto s = full();
    const auto psi = orbit_probes(s, ground(), 1, 5).front();
    const auto r = orbit_rank(s, psi);
    const double spread = r.singular_values.front() / r.singular_values.back();
    REQUIRE(spread > 10.0 * r.gap);
    const double tol = std::sqrt(r.gap * spread);
    CHECK_THROWS_AS(orbit_dimension(s, psi, tol), RankAmbiguous);
    // Above the spread everything is one cluster: full column rank.
    CHECK(orbit_dimension(s, psi, 10.0 * spread) == static_cast<int>(r.singular_values.size()));
  }

  TEST_CASE("controllability reports")
  {
    const auto f = controllability_report(full(), 20, 1);
    CHECK(f.verdict == "conditions-satisfied");
    CHECK(f.orbit_dim == 9);
    CHECK(f.probe_dims.size() == 20);
    CHECK(f.rank_gap >= 1e3);
    const auto r = controllability_report(sys_of(reduced_controls()), 20, 1);
    CHECK(r.verdict == "conditions-satisfied");
    CHECK(r.lie_dim == 15);
    const auto none = controllability_report(sys_of({}), 20, 1);
    CHECK(none.verdict == "not-satisfied");
    CHECK(none.orbit_dim == 0);
    const auto so3 = controllability_report(sys_of({G::L1, G::L2, G::L3}), 5, 1);
    CHECK(so3.verdict == "not-satisfied"); // trivial orbit through |100>
    const auto constant = controllability_report(sys_of({G::C}, false), 5, 1);
    CHECK(constant.verdict == "not-satisfied");
    // Determinism.
    CHECK(controllability_report(full(), 5, 7).probe_dims == controllability_report(full(), 5, 7).probe_dims);
  }
}
