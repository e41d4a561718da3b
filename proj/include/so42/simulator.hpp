#pragma once

// Piecewise-constant control propagation on the truncated model. The
// primary integrator works in the frame phi = e^{iHt} psi, where the
// Heisenberg-evolved controls become constant and each segment is a single
// exact exponential.

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "so42/controllability.hpp"
#include "so42/representation.hpp"

namespace so42::sim {

/// exp(K) for skew-Hermitian K (checked to 1e-12; SymmetryError otherwise).
/// The result is verified unitary to 1e-10.
rep::OperatorMatrix matrix_exponential(const rep::OperatorMatrix& k);

struct Segment {
  double duration = 0.0;
  std::array<double, kNumGenerators> u{};
};

struct PulseSchedule {
  std::vector<Segment> segments;

  double total_duration() const;
  /// Throws std::invalid_argument on nonpositive durations or nonfinite values.
  void validate() const;
  /// Concatenation s1 ++ s2.
  friend PulseSchedule operator+(PulseSchedule a, const PulseSchedule& b);
};

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kBoundaryFlag = 0.01;

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states; // lab frame
  std::vector<double> norm_defects;
  /// Population on shells n_max - 1 and n_max at each stored time.
  std::vector<double> boundary_population;
  double max_boundary_population = 0.0;
  /// Boundary population exceeded 1% somewhere.
  bool truncation_unreliable = false;
};

struct PropagateOptions {
  double t0 = 0.0;
  /// Extra evenly spaced samples inside each segment.
  int substeps = 0;
};

/// Throws std::invalid_argument on dimension mismatch, a non-unit psi0, an
/// invalid schedule, or a nonzero amplitude on a generator the system does
/// not control.
Trajectory propagate(const control::ControlSystem& sys, const PulseSchedule& schedule, const Eigen::VectorXcd& psi0,
                     const PropagateOptions& opt = {});

/// Lab-frame cross-check: steps of at most dt with the controls frozen at
/// the left endpoint (first order in dt). Returns the final state.
Eigen::VectorXcd propagate_sliced(const control::ControlSystem& sys, const PulseSchedule& schedule,
                                  const Eigen::VectorXcd& psi0, double dt, double t0 = 0.0);

/// |<target|psi>|^2.
double fidelity(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& target);

/// <psi|A|psi>; SymmetryError if A is not Hermitian or the imaginary part
/// exceeds 1e-12.
double observable_expectation(const Eigen::VectorXcd& psi, const rep::OperatorMatrix& a);

/// Basis vector |n,l,m> of the system's truncation.
Eigen::VectorXcd basis_vector(int n_max, const rep::BasisState& s);

/// Per-shell populations (index n - 1).
std::vector<double> shell_populations(const control::ControlSystem& sys, const Eigen::VectorXcd& psi);

struct OptimizeOptions {
  int n_segments = 20;
  std::size_t budget = 50000;
  std::uint64_t seed = 1;
  double segment_duration = 0.5;
  double initial_amplitude = 1.0;
  double max_amplitude = 5.0;
  double step = 1e-2;
  double fd_step = 1e-6;
};

struct OptimizeResult {
  PulseSchedule schedule;
  double fidelity = 0.0;
  std::size_t evaluations = 0;
  int starts = 0;
};

/// Random multistart plus forward-difference gradient ascent with
/// backtracking. Every objective value computed, including those inside a
/// gradient, counts against the budget. Deterministic for a given seed.
OptimizeResult optimize_pulse(const control::ControlSystem& sys, const Eigen::VectorXcd& psi0,
                              const Eigen::VectorXcd& target, const OptimizeOptions& opt = {});

} // namespace so42::sim
