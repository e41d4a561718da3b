#include "so42/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "so42/errors.hpp"

namespace so42::sim {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using control::ControlSystem;

rep::OperatorMatrix matrix_exponential(const rep::OperatorMatrix& k)
{
  if (k.tag() != rep::SymmetryTag::SkewHermitian) {
    if (const double d = rep::skew_defect(k.entries()); d >= rep::kHermitianTol) {
      std::ostringstream os;
      os << "matrix_exponential: input is not skew-Hermitian, defect " << d;
      throw SymmetryError(os.str());
    }
  }
  MatrixXcd u = k.entries().exp();
  return rep::OperatorMatrix::unitary(std::move(u));
}

double PulseSchedule::total_duration() const
{
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

void PulseSchedule::validate() const
{
  for (const auto& s : segments) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration))
      throw std::invalid_argument("schedule: segment durations must be positive and finite");
    for (double v : s.u)
      if (!std::isfinite(v)) throw std::invalid_argument("schedule: amplitudes must be finite");
  }
}

PulseSchedule operator+(PulseSchedule a, const PulseSchedule& b)
{
  a.segments.insert(a.segments.end(), b.segments.begin(), b.segments.end());
  return a;
}

namespace {

// Diagonal of the drift H'.
Eigen::VectorXcd drift_diag(const ControlSystem& sys) { return sys.drift.entries().diagonal(); }

// e^{H' t} v for diagonal H'.
VectorXcd drift_phase(const ControlSystem& sys, const VectorXcd& v, double t)
{
  return (drift_diag(sys) * t).array().exp().matrix().cwiseProduct(v);
}

void check_state(const ControlSystem& sys, const VectorXcd& psi, const char* what)
{
  if (psi.size() != sys.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument(std::string(what) + ": state must be normalized");
}

void check_schedule(const ControlSystem& sys, const PulseSchedule& schedule)
{
  schedule.validate();
  for (const auto& seg : schedule.segments)
    for (std::size_t i = 0; i < kNumGenerators; ++i)
      if (seg.u[i] != 0.0 && !sys.has_control(generator_at(i)))
        throw std::invalid_argument("schedule drives " + std::string(name(generator_at(i))) +
                                    ", which is not a control of the system");
}

// Segment generator: sum u_k G'_k(0), plus H' for systems whose controls do
// not evolve (those are integrated in the lab frame).
MatrixXcd segment_generator(const ControlSystem& sys, const std::array<double, kNumGenerators>& u)
{
  MatrixXcd k = sys.time_dependent ? MatrixXcd::Zero(sys.dim(), sys.dim()) : MatrixXcd(sys.drift.entries());
  for (const auto& c : sys.controls)
    if (const double a = u[index(c.id)]; a != 0.0) k += a * c.matrix.entries();
  return k;
}

double boundary_population(const ControlSystem& sys, const VectorXcd& psi)
{
  double p = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    if (sys.shell[static_cast<std::size_t>(i)] >= sys.n_max - 1) p += std::norm(psi(i));
  return p;
}

} // namespace

Trajectory propagate(const ControlSystem& sys, const PulseSchedule& schedule, const VectorXcd& psi0,
                     const PropagateOptions& opt)
{
  check_state(sys, psi0, "propagate");
  check_schedule(sys, schedule);
  if (opt.substeps < 0) throw std::invalid_argument("propagate: substeps must be nonnegative");

  Trajectory traj;
  auto record = [&](double t, const VectorXcd& psi) {
    traj.times.push_back(t);
    traj.states.push_back(psi);
    traj.norm_defects.push_back(std::abs(psi.norm() - 1.0));
    const double b = boundary_population(sys, psi);
    traj.boundary_population.push_back(b);
    traj.max_boundary_population = std::max(traj.max_boundary_population, b);
  };

  const bool frame = sys.time_dependent;
  double t = opt.t0;
  VectorXcd phi = frame ? drift_phase(sys, psi0, -t) : psi0;
  record(t, psi0);
  for (const auto& seg : schedule.segments) {
    const int pieces = opt.substeps + 1;
    const double dt = seg.duration / pieces;
    const MatrixXcd k = segment_generator(sys, seg.u);
    const MatrixXcd u = matrix_exponential(rep::OperatorMatrix::skew_hermitian(dt * k)).entries();
    const double start = t;
    for (int p = 1; p <= pieces; ++p) {
      phi = u * phi;
      t = p == pieces ? start + seg.duration : start + p * dt;
      record(t, frame ? drift_phase(sys, phi, t) : phi);
    }
  }
  traj.truncation_unreliable = traj.max_boundary_population > kBoundaryFlag;
  return traj;
}

VectorXcd propagate_sliced(const ControlSystem& sys, const PulseSchedule& schedule, const VectorXcd& psi0, double dt,
                           double t0)
{
  check_state(sys, psi0, "propagate_sliced");
  check_schedule(sys, schedule);
  if (!(dt > 0.0)) throw std::invalid_argument("propagate_sliced: dt must be positive");
  VectorXcd psi = psi0;
  double t = t0;
  for (const auto& seg : schedule.segments) {
    const int steps = std::max(1, static_cast<int>(std::ceil(seg.duration / dt - 1e-12)));
    const double h = seg.duration / steps;
    for (int s = 0; s < steps; ++s) {
      MatrixXcd k = sys.drift.entries();
      for (const auto& c : sys.controls)
        if (const double a = seg.u[index(c.id)]; a != 0.0) k += a * sys.evolve(c.matrix.entries(), t);
      psi = MatrixXcd(h * k).exp() * psi;
      t += h;
    }
  }
  return psi;
}

double fidelity(const VectorXcd& psi, const VectorXcd& target)
{
  if (psi.size() != target.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::min(1.0, std::norm(target.dot(psi)));
}

double observable_expectation(const VectorXcd& psi, const rep::OperatorMatrix& a)
{
  if (a.tag() != rep::SymmetryTag::Hermitian && rep::hermiticity_defect(a.entries()) >= rep::kHermitianTol)
    throw SymmetryError("observable_expectation: operator is not Hermitian");
  if (psi.size() != a.dim()) throw std::invalid_argument("observable_expectation: dimension mismatch");
  const cplx v = psi.dot(a.entries() * psi);
  if (std::abs(v.imag()) > 1e-12) throw SymmetryError("observable_expectation: expectation value is not real");
  return v.real();
}

VectorXcd basis_vector(int n_max, const rep::BasisState& s)
{
  const rep::Basis basis(n_max);
  const auto i = basis.index_of(s);
  if (!i) throw std::invalid_argument("state " + rep::to_string(s) + " is outside the truncated space");
  VectorXcd v = VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
  v(static_cast<Eigen::Index>(*i)) = 1.0;
  return v;
}

std::vector<double> shell_populations(const ControlSystem& sys, const VectorXcd& psi)
{
  std::vector<double> pop(static_cast<std::size_t>(sys.n_max), 0.0);
  for (Eigen::Index i = 0; i < psi.size(); ++i) pop[static_cast<std::size_t>(sys.shell[static_cast<std::size_t>(i)] - 1)] += std::norm(psi(i));
  return pop;
}

namespace {

// Objective with cached forward states and backward co-states, so that a
// single-segment perturbation costs one exponential.
class PulseObjective {
public:
  PulseObjective(const ControlSystem& sys, const VectorXcd& psi0, const VectorXcd& target, const OptimizeOptions& opt)
      : sys_(sys), n_seg_(opt.n_segments), n_ctl_(static_cast<int>(sys.controls.size())), dt_(opt.segment_duration),
        psi0_(psi0)
  {
    // Lab fidelity |<target| e^{H'T} phi_N>|^2 = |<e^{-H'T} target| phi_N>|^2.
    const double total = dt_ * n_seg_;
    tau_ = sys.time_dependent ? drift_phase(sys, target, -total) : target;
  }

  std::size_t size() const { return static_cast<std::size_t>(n_seg_ * n_ctl_); }

  MatrixXcd segment(const Eigen::VectorXd& x, int k) const
  {
    std::array<double, kNumGenerators> u{};
    for (int j = 0; j < n_ctl_; ++j) u[index(sys_.controls[static_cast<std::size_t>(j)].id)] = x(k * n_ctl_ + j);
    return MatrixXcd(dt_ * segment_generator(sys_, u)).exp();
  }

  // Full evaluation; caches forward/backward states for gradient().
  double value(const Eigen::VectorXd& x)
  {
    unitaries_.resize(static_cast<std::size_t>(n_seg_));
    forward_.assign(static_cast<std::size_t>(n_seg_ + 1), psi0_);
    for (int k = 0; k < n_seg_; ++k) {
      unitaries_[static_cast<std::size_t>(k)] = segment(x, k);
      forward_[static_cast<std::size_t>(k + 1)] = unitaries_[static_cast<std::size_t>(k)] * forward_[static_cast<std::size_t>(k)];
    }
    backward_.assign(static_cast<std::size_t>(n_seg_ + 1), tau_);
    for (int k = n_seg_; k > 0; --k)
      backward_[static_cast<std::size_t>(k - 1)] = unitaries_[static_cast<std::size_t>(k - 1)].adjoint() * backward_[static_cast<std::size_t>(k)];
    return std::norm(tau_.dot(forward_.back()));
  }

  // Forward differences around the x last passed to value(); one objective
  // evaluation per coordinate.
  Eigen::VectorXd gradient(const Eigen::VectorXd& x, double f0, double eps) const
  {
    Eigen::VectorXd g(static_cast<Eigen::Index>(size()));
    for (int k = 0; k < n_seg_; ++k)
      for (int j = 0; j < n_ctl_; ++j) {
        Eigen::VectorXd xp = x;
        xp(k * n_ctl_ + j) += eps;
        const VectorXcd out = segment(xp, k) * forward_[static_cast<std::size_t>(k)];
        const double f = std::norm(backward_[static_cast<std::size_t>(k + 1)].dot(out));
        g(k * n_ctl_ + j) = (f - f0) / eps;
      }
    return g;
  }

  PulseSchedule schedule(const Eigen::VectorXd& x) const
  {
    PulseSchedule s;
    for (int k = 0; k < n_seg_; ++k) {
      Segment seg;
      seg.duration = dt_;
      for (int j = 0; j < n_ctl_; ++j) seg.u[index(sys_.controls[static_cast<std::size_t>(j)].id)] = x(k * n_ctl_ + j);
      s.segments.push_back(seg);
    }
    return s;
  }

private:
  const ControlSystem& sys_;
  int n_seg_, n_ctl_;
  double dt_;
  VectorXcd psi0_, tau_;
  std::vector<MatrixXcd> unitaries_;
  std::vector<VectorXcd> forward_, backward_;
};

} // namespace

OptimizeResult optimize_pulse(const ControlSystem& sys, const VectorXcd& psi0, const VectorXcd& target,
                              const OptimizeOptions& opt)
{
  if (opt.n_segments < 1) throw std::invalid_argument("optimize_pulse: n_segments must be at least 1");
  if (!(opt.segment_duration > 0.0)) throw std::invalid_argument("optimize_pulse: segment duration must be positive");
  check_state(sys, psi0, "optimize_pulse");
  if (target.size() != sys.dim()) throw std::invalid_argument("optimize_pulse: target outside the truncated space");
  check_state(sys, target, "optimize_pulse");

  PulseObjective obj(sys, psi0, target, opt);
  const auto n = static_cast<Eigen::Index>(obj.size());
  OptimizeResult best;
  std::size_t used = 0;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  best.fidelity = obj.value(x);
  best.schedule = obj.schedule(x);
  ++used;
  constexpr double kDone = 1.0 - 1e-9;
  if (best.fidelity >= kDone || n == 0) {
    best.evaluations = used;
    return best;
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> init(-opt.initial_amplitude, opt.initial_amplitude);
  auto clamp = [&](Eigen::VectorXd v) {
    return v.cwiseMax(-opt.max_amplitude).cwiseMin(opt.max_amplitude).eval();
  };

  while (used + static_cast<std::size_t>(n) + 1 <= opt.budget && best.fidelity < kDone) {
    ++best.starts;
    for (Eigen::Index i = 0; i < n; ++i) x(i) = init(rng);
    double f = obj.value(x);
    ++used;
    double alpha = opt.step;
    while (used + static_cast<std::size_t>(n) + 1 <= opt.budget && f < kDone && alpha > 1e-8) {
      const Eigen::VectorXd g = obj.gradient(x, f, opt.fd_step);
      used += static_cast<std::size_t>(n);
      if (g.norm() < 1e-12) break;
      // Backtracking: halve until the step improves, grow after success.
      bool moved = false;
      while (alpha > 1e-8 && used < opt.budget) {
        const Eigen::VectorXd xn = clamp(x + alpha * g);
        const double fn = obj.value(xn);
        ++used;
        if (fn > f) {
          x = xn;
          f = fn;
          alpha *= 1.5;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      // The accepted point was the last one evaluated, so the cache is current.
      if (!moved) break;
    }
    if (f > best.fidelity) {
      best.fidelity = f;
      best.schedule = obj.schedule(x);
    }
  }
  best.evaluations = used;
  return best;
}

} // namespace so42::sim
