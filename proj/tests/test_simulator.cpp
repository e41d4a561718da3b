#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "so42/errors.hpp"
#include "so42/simulator.hpp"

using namespace so42;
using namespace so42::sim;
using G = GeneratorId;
using cplx = std::complex<double>;

namespace {

const rep::RepSet& rep4()
{
  static const rep::RepSet r = rep::build_rep(4);
  return r;
}

control::ControlSystem sys_of(std::vector<G> ids) { return control::make_system(rep4(), ids); }

control::ControlSystem full() { return sys_of(control::parse_control_list("all")); }

Eigen::VectorXcd ket(int n, int l, int m) { return basis_vector(4, {n, l, m}); }

Segment seg(double duration, std::initializer_list<std::pair<G, double>> amps)
{
  Segment s;
  s.duration = duration;
  for (auto [g, a] : amps) s.u[index(g)] = a;
  return s;
}

PulseSchedule random_schedule(std::mt19937_64& rng, int n, const std::vector<G>& ids, double duration)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PulseSchedule s;
  for (int k = 0; k < n; ++k) {
    Segment x;
    x.duration = duration;
    for (auto g : ids) x.u[index(g)] = u(rng);
    s.segments.push_back(x);
  }
  return s;
}

// exp(K) for skew-Hermitian K from the spectrum of the Hermitian iK.
Eigen::MatrixXcd spectral_exp(const Eigen::MatrixXcd& k)
{
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cplx(0, 1) * k);
  const Eigen::VectorXcd ph = (es.eigenvalues().cast<cplx>() * cplx(0, -1)).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

TEST_SUITE("simulator")
{
  TEST_CASE("matrix exponential")
  {
    const auto z = matrix_exponential(rep::OperatorMatrix::skew_hermitian(Eigen::MatrixXcd::Zero(30, 30)));
    CHECK(z.tag() == rep::SymmetryTag::Unitary);
    CHECK(rep::max_abs(z.entries() - Eigen::MatrixXcd::Identity(30, 30)) < 1e-15);

    const auto s = full();
    const auto u = matrix_exponential(rep::OperatorMatrix::skew_hermitian(2.5 * s.drift.entries()));
    for (Eigen::Index i = 0; i < 30; ++i) {
      const double e = rep4().hamiltonian.entries()(i, i).real();
      CHECK(std::abs(u.entries()(i, i) - std::exp(cplx(0, -e * 2.5))) < 1e-13);
    }

    // L1 annihilates s-states, so exp(theta L1') leaves them fixed.
    const auto r = matrix_exponential(rep::OperatorMatrix::skew_hermitian(0.9 * s.realization[index(G::L1)]));
    for (int n = 1; n <= 4; ++n) CHECK((r.entries() * ket(n, 0, 0) - ket(n, 0, 0)).norm() < 1e-14);

    Eigen::MatrixXcd h = rep4().hamiltonian.entries();
    CHECK_THROWS_AS(matrix_exponential(rep::OperatorMatrix::untagged(h)), SymmetryError);
  }

  TEST_CASE("matrix exponential agrees with the spectral oracle")
  {
    const auto s = full();
    Eigen::MatrixXcd k = 0.7 * s.realization[index(G::C)] - 0.4 * s.realization[index(G::B2)] +
                         0.3 * s.realization[index(G::L1)];
    const auto u = matrix_exponential(rep::OperatorMatrix::skew_hermitian(k));
    CHECK(rep::max_abs(u.entries() - spectral_exp(k)) < 1e-12);
  }

  TEST_CASE("zero schedule: eigenstate phase evolution")
  {
    PulseSchedule s;
    s.segments = {seg(1.0, {}), seg(2.5, {})};
    const auto traj = propagate(full(), s, ket(1, 0, 0));
    REQUIRE(traj.states.size() == 3);
    CHECK(traj.times.back() == doctest::Approx(3.5));
    CHECK(std::abs(traj.states.back()(0) - std::exp(cplx(0, 0.5 * 3.5))) < 1e-12);
    const auto t2 = propagate(full(), s, ket(3, 2, 1));
    const auto idx = static_cast<Eigen::Index>(*rep4().basis.index_of({3, 2, 1}));
    CHECK(std::abs(t2.states.back()(idx) - std::exp(cplx(0, 3.5 / 18.0))) < 1e-12);
  }

  TEST_CASE("pure D pulse keeps <H>")
  {
    PulseSchedule s;
    s.segments = {seg(1.0, {{G::D, 0.8}}), seg(0.5, {{G::D, -1.3}})};
    Eigen::VectorXcd psi = (ket(1, 0, 0) + ket(2, 1, 0)) / std::sqrt(2.0);
    const auto traj = propagate(full(), s, psi, {0.0, 3});
    const double e0 = observable_expectation(psi, rep4().hamiltonian);
    for (const auto& x : traj.states) CHECK(observable_expectation(x, rep4().hamiltonian) == doctest::Approx(e0).epsilon(1e-12));
  }

  TEST_CASE("unit C' pulse moves population to n = 2")
  {
    PulseSchedule s;
    s.segments = {seg(1.0, {{G::C, 1.0}})};
    const auto sys = full();
    const auto traj = propagate(sys, s, ket(1, 0, 0));
    const auto pop = shell_populations(sys, traj.states.back());
    CHECK(pop[1] > 0.05);
    // Oracle: e^{H'} exp(C') |100> with the spectral exponential.
    const Eigen::VectorXcd ref = spectral_exp(sys.drift.entries()) * spectral_exp(sys.realization[index(G::C)]) * ket(1, 0, 0);
    CHECK((traj.states.back() - ref).norm() < 1e-12);
    CHECK(std::abs(observable_expectation(traj.states.back(), rep4().hamiltonian) + 0.5) > 1e-3);
  }

  TEST_CASE("fidelity and expectations")
  {
    const auto v = (ket(2, 1, 0) + cplx(0, 1) * ket(3, 0, 0)).normalized();
    CHECK(fidelity(v, v) == doctest::Approx(1.0));
    CHECK(fidelity(ket(1, 0, 0), ket(2, 0, 0)) == 0.0);
    CHECK(fidelity(std::exp(cplx(0, 0.7)) * v, v) == doctest::Approx(1.0));
    const auto& r = rep4();
    CHECK(observable_expectation(ket(3, 2, -2), r.generators[index(G::L3)]) == doctest::Approx(-2.0));
    CHECK(observable_expectation(ket(3, 2, -2), r.generators[index(G::D)]) == doctest::Approx(3.0));
    CHECK(observable_expectation(ket(1, 0, 0), r.hamiltonian) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(observable_expectation(v, rep::OperatorMatrix::untagged(full().drift.entries())), SymmetryError);
  }

  TEST_CASE("input validation")
  {
    PulseSchedule s;
    s.segments = {seg(1.0, {{G::S, 1.0}})};
    CHECK_THROWS_AS(propagate(sys_of({G::C}), s, ket(1, 0, 0)), std::invalid_argument);
    s.segments = {seg(-1.0, {})};
    CHECK_THROWS_AS(propagate(full(), s, ket(1, 0, 0)), std::invalid_argument);
    s.segments = {seg(1.0, {})};
    CHECK_THROWS_AS(propagate(full(), s, Eigen::VectorXcd::Ones(30)), std::invalid_argument);
    CHECK_THROWS_AS(propagate(full(), s, Eigen::VectorXcd::Ones(3).normalized()), std::invalid_argument);
    CHECK_THROWS_AS(basis_vector(4, {5, 0, 0}), std::invalid_argument);
  }

  TEST_CASE("unitarity over 1000 random segments")
  {
    std::mt19937_64 rng(1);
    const auto all = all_generators();
    const auto s = random_schedule(rng, 1000, {all.begin(), all.end()}, 0.1);
    const auto traj = propagate(full(), s, ket(1, 0, 0));
    double worst = 0.0;
    for (double d : traj.norm_defects) worst = std::max(worst, d);
    CHECK(worst < 1e-10);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  }

  TEST_CASE("lab-frame slicing converges to the rotating-frame result at first order")
  {
    std::mt19937_64 rng(2);
    const auto sys = sys_of({G::S, G::C, G::B3});
    const auto s = random_schedule(rng, 3, {G::S, G::C, G::B3}, 0.5);
    const auto exact = propagate(sys, s, ket(1, 0, 0)).states.back();
    const double e1 = (propagate_sliced(sys, s, ket(1, 0, 0), 0.01) - exact).norm();
    const double e2 = (propagate_sliced(sys, s, ket(1, 0, 0), 0.001) - exact).norm();
    CHECK(e2 < e1);
    CHECK(e1 / e2 == doctest::Approx(10.0).epsilon(0.15));
  }

  TEST_CASE("energy is invariant under L, A, D controls and changed by C")
  {
    std::mt19937_64 rng(3);
    const std::vector<G> lad{G::L1, G::L2, G::L3, G::A1, G::A2, G::A3, G::D};
    const auto s = random_schedule(rng, 50, lad, 0.3);
    const Eigen::VectorXcd psi = (ket(2, 1, 1) + ket(3, 0, 0) + ket(1, 0, 0)).normalized();
    const double e0 = observable_expectation(psi, rep4().hamiltonian);
    for (const auto& x : propagate(sys_of(lad), s, psi, {0.0, 2}).states)
      CHECK(std::abs(observable_expectation(x, rep4().hamiltonian) - e0) < 1e-10);
  }

  TEST_CASE("concatenation")
  {
    std::mt19937_64 rng(4);
    const auto all = all_generators();
    const auto sys = full();
    const auto s1 = random_schedule(rng, 7, {all.begin(), all.end()}, 0.2);
    const auto s2 = random_schedule(rng, 5, {all.begin(), all.end()}, 0.3);
    const auto whole = propagate(sys, s1 + s2, ket(1, 0, 0)).states.back();
    const auto mid = propagate(sys, s1, ket(1, 0, 0)).states.back();
    const auto split = propagate(sys, s2, mid, {s1.total_duration(), 0}).states.back();
    CHECK((whole - split).norm() < 1e-10);
  }

  TEST_CASE("boundary monitor flags leakage")
  {
    PulseSchedule s;
    s.segments = {seg(2.0, {{G::C, 2.0}})};
    const auto traj = propagate(full(), s, ket(1, 0, 0), {0.0, 5});
    CHECK(traj.boundary_population.size() == traj.states.size());
    CHECK(traj.truncation_unreliable == (traj.max_boundary_population > 0.01));
    PulseSchedule quiet;
    quiet.segments = {seg(1.0, {{G::L3, 1.0}})};
    CHECK_FALSE(propagate(full(), quiet, ket(2, 1, 0)).truncation_unreliable);
  }

  TEST_CASE("optimizer")
  {
    const auto sys = full();
    OptimizeOptions o;
    o.n_segments = 3;
    o.budget = 2000;
    const auto same = optimize_pulse(sys, ket(2, 1, 0), ket(2, 1, 0), o);
    CHECK(same.fidelity == doctest::Approx(1.0));
    for (const auto& s : same.schedule.segments)
      for (double u : s.u) CHECK(u == 0.0);

    const auto a = optimize_pulse(sys, ket(1, 0, 0), ket(2, 0, 0), o);
    const auto b = optimize_pulse(sys, ket(1, 0, 0), ket(2, 0, 0), o);
    CHECK(a.fidelity == b.fidelity);
    CHECK(a.evaluations <= o.budget);
    CHECK(a.fidelity > fidelity(ket(1, 0, 0), ket(2, 0, 0)));
    // The reported fidelity is that of the returned schedule.
    const auto traj = propagate(sys, a.schedule, ket(1, 0, 0));
    CHECK(fidelity(traj.states.back(), ket(2, 0, 0)) == doctest::Approx(a.fidelity).epsilon(1e-9));

    CHECK_THROWS_AS(optimize_pulse(sys, ket(1, 0, 0), Eigen::VectorXcd::Ones(14).normalized(), o),
                    std::invalid_argument);
    o.n_segments = 0;
    CHECK_THROWS_AS(optimize_pulse(sys, ket(1, 0, 0), ket(2, 0, 0), o), std::invalid_argument);
  }
}
