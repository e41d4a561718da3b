#pragma once

// Truncated bound-state representation of so(4,2) on {|nlm> : n <= n_max}.
// Ladder actions follow the printed matrix elements; the coefficients the
// printed formulas leave undefined (omega, beta, gamma) are solved from the
// commutation relations and validated on the truncation interior.

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "so42/generator.hpp"

namespace so42::rep {

struct BasisState {
  int n = 1;
  int l = 0;
  int m = 0;
  auto operator<=>(const BasisState&) const = default;
};

std::string to_string(const BasisState& s);

/// Parses "n,l,m". Throws std::invalid_argument on malformed or invalid labels.
BasisState parse_state(const std::string& text);

/// Ordered basis, lexicographic in (n, l, m).
class Basis {
public:
  explicit Basis(int n_max);

  int n_max() const { return n_max_; }
  std::size_t dim() const { return states_.size(); }
  const std::vector<BasisState>& states() const { return states_; }
  const BasisState& operator[](std::size_t i) const { return states_[i]; }
  std::optional<std::size_t> index_of(const BasisState& s) const;

  /// n_max (n_max + 1)(2 n_max + 1) / 6.
  static std::size_t dimension(int n_max);

private:
  int n_max_;
  std::vector<BasisState> states_;
};

Basis build_basis(int n_max);

inline constexpr int kMaxDenseNMax = 10;

enum class CoefficientKind { Alpha, C, U, V };

/// Printed closed forms. alpha(l, m) = sqrt((l-m)(l+m)),
/// c(n, l) = sqrt((n-l)(n+l) / ((2l-1)(2l+1))),
/// u(n, l) = sqrt((n+l-1)(n+l) / ((2l-1)(2l+1))) / 2,
/// v(n, l) = sqrt((n-l)(n-l+1) / ((2l-1)(2l+1))) / 2.
/// Throws std::out_of_range outside 0 <= |m| <= l (alpha) or
/// 1 <= l <= n (c, u) / 1 <= l <= n + 1 (v).
double closed_form_coefficient(CoefficientKind kind, int n, int l, int m = 0);

/// Solved ladder coefficients for one cutoff.
///  omega_rot(l, m) = <l, m+1| L+ |l, m>
///  beta(l, m), gamma(l, m) as they appear in the A+, B+, Gamma+ actions
///  omega_rad(n, l) = <n+1, l| T+ |n, l>
///  omega_rad_lower(n, l) = <n-1, l| T- |n, l>
class CoefficientTables {
public:
  int n_max() const { return n_max_; }
  double omega_rot(int l, int m) const;
  double beta(int l, int m) const;
  double gamma(int l, int m) const;
  double omega_rad(int n, int l) const;
  double omega_rad_lower(int n, int l) const;

  /// Largest violation of the recursion boundary conditions
  /// (<-l|L+|-l-1> and T- annihilating the lowest shell).
  double boundary_residual = 0.0;
  /// Largest commutator residual of the validating relations on the interior.
  double validation_residual = 0.0;
  /// max |f(-k) - f(k-1)| over the squared omega tables, where f is the
  /// polynomial interpolating the solved values: checks that the lowering
  /// coefficients are the raising ones at negated index.
  double index_negation_residual = 0.0;

private:
  friend CoefficientTables derive_ladder_coefficients(int n_max);
  int n_max_ = 0;
  std::map<std::pair<int, int>, double> omega_rot_, beta_, gamma_, omega_rad_, omega_rad_lower_;
};

/// Solves (a) omega_rot from [L+, L-] = 2 L3, (b) beta, gamma from the
/// componentwise [L, A] = iA, (c) omega_rad from [T+, T-] = -2D, all with real
/// nonnegative phases, then validates against the commutators on the
/// interior. Throws ConstraintError when a solution is negative or fails
/// validation at 1e-10. Requires n_max >= 3.
CoefficientTables derive_ladder_coefficients(int n_max);

enum class SymmetryTag { None, Hermitian, SkewHermitian, Unitary };
std::string to_string(SymmetryTag tag);

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

/// Dense complex matrix whose symmetry tag is verified on construction.
class OperatorMatrix {
public:
  OperatorMatrix() = default;

  static OperatorMatrix hermitian(Eigen::MatrixXcd m, double tol = kHermitianTol);
  static OperatorMatrix skew_hermitian(Eigen::MatrixXcd m, double tol = kHermitianTol);
  static OperatorMatrix unitary(Eigen::MatrixXcd m, double tol = kUnitaryTol);
  static OperatorMatrix untagged(Eigen::MatrixXcd m);

  const Eigen::MatrixXcd& entries() const { return m_; }
  SymmetryTag tag() const { return tag_; }
  Eigen::Index dim() const { return m_.rows(); }

private:
  OperatorMatrix(Eigen::MatrixXcd m, SymmetryTag tag) : m_(std::move(m)), tag_(tag) {}
  Eigen::MatrixXcd m_;
  SymmetryTag tag_ = SymmetryTag::None;
};

double max_abs(const Eigen::MatrixXcd& m);
double hermiticity_defect(const Eigen::MatrixXcd& m);
double skew_defect(const Eigen::MatrixXcd& m);
double unitarity_defect(const Eigen::MatrixXcd& m);

/// Raising/lowering operators in the printed form, before recombination
/// into Cartesian components. The lowering operators use the printed
/// formulas, not the adjoint of the raising ones.
struct LadderOperators {
  Eigen::MatrixXcd l3, l_plus, l_minus;
  Eigen::MatrixXcd a3, a_plus, a_minus;
  Eigen::MatrixXcd b3, b_plus, b_minus;
  Eigen::MatrixXcd g3, g_plus, g_minus;
  Eigen::MatrixXcd d, t_plus, t_minus;
};

LadderOperators build_ladders(const Basis& basis, const CoefficientTables& tables);

/// Full set of generator matrices for one cutoff.
struct RepSet {
  int n_max = 0;
  Basis basis{1};
  CoefficientTables tables;
  std::array<OperatorMatrix, kNumGenerators> generators;
  OperatorMatrix hamiltonian;
  /// 1 on states with n <= n_max - 2, else 0. A prefix of the basis.
  Eigen::VectorXd interior_projector;
  std::size_t interior_dim = 0;

  const Eigen::MatrixXcd& operator[](GeneratorId g) const { return generators[index(g)].entries(); }
};

/// Generator matrix from the ladder actions. X1 = (X+ + X-)/2,
/// X2 = (X+ - X-)/(2i); S = (T+ - T-)/(2i), C = (T+ + T-)/2. Actions that
/// would leave the basis (n > n_max) are dropped.
OperatorMatrix build_generator_matrix(GeneratorId g, int n_max, const CoefficientTables& tables);

/// Diagonal H with E_n = -1/(2 n^2).
OperatorMatrix build_hamiltonian(int n_max);

/// Builds basis, coefficient tables, all generators and H. n_max in [3, 10].
RepSet build_rep(int n_max);

struct PairResidual {
  GeneratorId a;
  GeneratorId b;
  double residual = 0.0;
};

struct ResidualReport {
  std::vector<PairResidual> pairs;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// max|P([X_a, X_b] - i sum_c f_ab^c X_c)P| for all 105 pairs. With
/// `project == false`, P is the identity.
ResidualReport check_commutators(const RepSet& rep, double tol, bool project = true);

/// Residual of a single pair, as in check_commutators.
double commutator_residual(const RepSet& rep, GeneratorId a, GeneratorId b, bool project = true);

/// Largest Hermiticity defect over all 15 generators.
double max_hermiticity_defect(const RepSet& rep);

/// G(t) = e^{-iHt} G(0) e^{iHt}, entrywise G(0)_jk exp(-i (E_j - E_k) t).
OperatorMatrix heisenberg_generator(const RepSet& rep, GeneratorId g, double t);

/// Same conjugation for an arbitrary matrix with the diagonal energies of rep.
Eigen::MatrixXcd heisenberg_evolve(const RepSet& rep, const Eigen::MatrixXcd& g0, double t);

struct CasimirReport {
  /// max |P (L.A + A.L) P|.
  double l_dot_a = 0.0;
  /// max |P (L^2 + A^2 - D^2 + 1) P|.
  double quadratic = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

CasimirReport casimir_check(const RepSet& rep, double tol = 1e-9);

/// L^2, A^2 and D as matrices (used for state-level Casimir inspection).
Eigen::MatrixXcd l_squared(const RepSet& rep);
Eigen::MatrixXcd a_squared(const RepSet& rep);

} // namespace so42::rep
