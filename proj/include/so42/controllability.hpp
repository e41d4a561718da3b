#pragma once

// Lie-rank checks for the bilinear control system
//   dpsi/dt = (H' + sum_k u_k(t) G'_k(t)) psi
// on a truncated representation: B1 recursion, ideal condition and
// orbit-rank constancy.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "so42/algebra.hpp"
#include "so42/generator.hpp"
#include "so42/representation.hpp"

namespace so42::control {

struct ControlTerm {
  GeneratorId id;
  rep::OperatorMatrix matrix; // skew-Hermitian, t = 0
};

struct ControlSystem {
  rep::OperatorMatrix drift; // H' = -iH, diagonal
  std::vector<ControlTerm> controls;
  /// Controls evolve as G'(t) = e^{H't} G'(0) e^{-H't} (spectrum-generating form).
  bool time_dependent = true;

  int n_max = 0;
  /// Skew-Hermitian matrices of all 15 generators at t = 0; used to realize
  /// abstract algebra elements.
  std::array<Eigen::MatrixXcd, kNumGenerators> realization;
  /// Principal quantum number of each basis state.
  std::vector<int> shell;
  /// Basis states with n <= n_max - 2 form this prefix.
  std::size_t interior_dim = 0;

  Eigen::Index dim() const { return drift.dim(); }
  bool has_control(GeneratorId g) const;
  std::vector<GeneratorId> control_ids() const;

  /// G'(t) for an arbitrary t = 0 matrix (identity map when not time dependent).
  Eigen::MatrixXcd evolve(const Eigen::MatrixXcd& g0, double t) const;

  /// Throws std::invalid_argument when dimensions disagree or the drift is
  /// not diagonal with a purely imaginary diagonal.
  void validate() const;
};

/// System with drift -iH and the listed controls (-i times the generator).
ControlSystem make_system(const rep::RepSet& rep, std::span<const GeneratorId> controls, bool time_dependent = true);

/// Parses "L1,L2,A3,S,C" (also accepts "all"). Throws std::invalid_argument.
std::vector<GeneratorId> parse_control_list(const std::string& text);

/// The reduced control set {L1, L2, A3, S, C}.
std::vector<GeneratorId> reduced_controls();

struct LieSpan {
  SubalgebraResult<Rational> abstract;
  std::vector<Eigen::MatrixXcd> matrices; // realization of the abstract basis at t = 0
};

/// Bracket closure of the control generators. Throws std::invalid_argument
/// on an empty control set.
LieSpan lie_span_controls(const ControlSystem& sys);

Eigen::MatrixXcd realize(const ControlSystem& sys, const AlgebraElement& x);

/// max over the closure basis of |(G(t+h) - G(t-h))/(2h) - [H', G(t)]|,
/// i.e. the finite-difference B1 = -[H', B] + dB/dt. Throws
/// std::invalid_argument when h <= 0. Zero for an empty control set.
double b1_residual(const ControlSystem& sys, double t, double h);

inline constexpr double kB1Tolerance = 1e-6;
inline constexpr double kIdealTolerance = 1e-10;
inline constexpr double kRankGapRatio = 1e3;

/// Exact closure check plus an interior-projected matrix check at 1e-10.
/// Systems with a nonzero B1 build C = L(B, B1, B2, ...) in matrix space first.
bool check_ideal_condition(const ControlSystem& sys);

/// Matrix basis of C at time t (C = B for conforming systems).
std::vector<Eigen::MatrixXcd> c_basis(const ControlSystem& sys, double t = 0.0);

struct OrbitRank {
  int rank = 0;
  /// Ratio between the smallest retained and largest discarded singular value.
  double gap = 0.0;
  std::vector<double> singular_values;
};

/// Numerical rank of span_R{X psi : X in C}, viewed in R^{2 dim}.
/// Throws RankAmbiguous when no gap of tol_ratio exists.
OrbitRank orbit_rank(const ControlSystem& sys, const Eigen::VectorXcd& psi, double tol_ratio = kRankGapRatio,
                     double t = 0.0);
int orbit_dimension(const ControlSystem& sys, const Eigen::VectorXcd& psi, double tol_ratio = kRankGapRatio,
                    double t = 0.0);

struct ProbeOptions {
  int min_segments = 3;
  int max_segments = 6;
  double segment_duration = 0.02;
  double amplitude = 1.0;
  double interior_population = 0.99;
  int max_attempts = 1000;
};

/// Random orbit points: 3-6 short random control exponentials applied to psi.
std::vector<Eigen::VectorXcd> orbit_probes(const ControlSystem& sys, const Eigen::VectorXcd& psi, int count,
                                           std::uint64_t seed, const ProbeOptions& opt = {});

struct ControllabilityReport {
  double b1_residual = 0.0;
  bool ideal_condition_ok = false;
  int orbit_dim = 0;
  double rank_gap = 0.0;
  std::string verdict = "not-satisfied";

  int lie_dim = 0;
  int lie_depth = 0;
  std::vector<int> probe_dims;
  bool orbit_constant = false;
  bool rank_ambiguous = false;
  int probes = 0;
  std::uint64_t seed = 0;
};

/// Aggregates the three checks. The seed state is |1,0,0>; probe states are
/// orbit_probes of it.
ControllabilityReport controllability_report(const ControlSystem& sys, int probes, std::uint64_t seed);

} // namespace so42::control
