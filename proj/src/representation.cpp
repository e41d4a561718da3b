#include "so42/representation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "so42/algebra.hpp"
#include "so42/errors.hpp"

namespace so42::rep {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;

namespace {

constexpr cplx kI{0.0, 1.0};

// Clamp tiny negative round-off to zero; genuine negatives signal an
// inconsistent constraint system.
double checked_sqrt(double x, const char* what)
{
  if (x < -1e-12) {
    std::ostringstream os;
    os << what << ": squared coefficient " << x << " is negative";
    throw ConstraintError(os.str());
  }
  return std::sqrt(std::max(x, 0.0));
}

double alpha(int l, int m) { return closed_form_coefficient(CoefficientKind::Alpha, 0, l, m); }

template <class Map>
double lookup(const Map& map, int a, int b, const char* what)
{
  const auto it = map.find({a, b});
  if (it == map.end()) {
    std::ostringstream os;
    os << what << "(" << a << ", " << b << ") outside the solved table";
    throw std::out_of_range(os.str());
  }
  return it->second;
}

// Quadratic through (x0,y0), (x1,y1), (x2,y2), evaluated at x.
double lagrange3(const std::array<double, 3>& xs, const std::array<double, 3>& ys, double x)
{
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = ys[i];
    for (int j = 0; j < 3; ++j)
      if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
    sum += w;
  }
  return sum;
}

MatrixXcd commutator(const MatrixXcd& a, const MatrixXcd& b) { return a * b - b * a; }

struct Cartesian {
  MatrixXcd x1, x2, x3;
};

Cartesian cartesian(const MatrixXcd& plus, const MatrixXcd& minus, const MatrixXcd& third)
{
  return {(plus + minus) / 2.0, (plus - minus) / (2.0 * kI), third};
}

std::array<MatrixXcd, kNumGenerators> all_matrices(const LadderOperators& lad)
{
  const auto l = cartesian(lad.l_plus, lad.l_minus, lad.l3);
  const auto a = cartesian(lad.a_plus, lad.a_minus, lad.a3);
  const auto b = cartesian(lad.b_plus, lad.b_minus, lad.b3);
  const auto g = cartesian(lad.g_plus, lad.g_minus, lad.g3);
  const MatrixXcd s = (lad.t_plus - lad.t_minus) / (2.0 * kI);
  const MatrixXcd c = (lad.t_plus + lad.t_minus) / 2.0;
  return {l.x1, l.x2, l.x3, a.x1, a.x2, a.x3, b.x1, b.x2, b.x3, g.x1, g.x2, g.x3, s, c, lad.d};
}

// Mask of states with n <= n_cut, which is a prefix of the basis.
std::size_t prefix_size(int n_cut) { return n_cut <= 0 ? 0 : Basis::dimension(n_cut); }

double block_max(const MatrixXcd& m, std::size_t k)
{
  if (k == 0) return 0.0;
  return m.topLeftCorner(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff();
}

double table_residual(const std::array<MatrixXcd, kNumGenerators>& x, GeneratorId a, GeneratorId b,
                      std::size_t k)
{
  if (k == 0) return 0.0;
  const auto& table = StructureTable::so42();
  const auto kk = static_cast<Eigen::Index>(k);
  const MatrixXcd& xa = x[index(a)];
  const MatrixXcd& xb = x[index(b)];
  MatrixXcd r = xa.topRows(kk) * xb.leftCols(kk) - xb.topRows(kk) * xa.leftCols(kk);
  for (std::size_t c = 0; c < kNumGenerators; ++c)
    if (int f = table.coefficient(a, b, generator_at(c)); f != 0)
      r -= kI * static_cast<double>(f) * x[c].topLeftCorner(kk, kk);
  return r.cwiseAbs().maxCoeff();
}

} // namespace

std::string to_string(const BasisState& s)
{
  std::ostringstream os;
  os << s.n << "," << s.l << "," << s.m;
  return os.str();
}

BasisState parse_state(const std::string& text)
{
  BasisState s;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> s.n >> c1 >> s.l >> c2 >> s.m) || c1 != ',' || c2 != ',' || !(is >> std::ws).eof())
    throw std::invalid_argument("state label must be \"n,l,m\": " + text);
  if (s.n < 1 || s.l < 0 || s.l >= s.n || std::abs(s.m) > s.l)
    throw std::invalid_argument("invalid quantum numbers: " + text);
  return s;
}

Basis::Basis(int n_max) : n_max_(n_max)
{
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  states_.reserve(dimension(n_max));
  for (int n = 1; n <= n_max; ++n)
    for (int l = 0; l < n; ++l)
      for (int m = -l; m <= l; ++m) states_.push_back({n, l, m});
}

std::size_t Basis::dimension(int n_max)
{
  const auto n = static_cast<std::size_t>(n_max);
  return n * (n + 1) * (2 * n + 1) / 6;
}

std::optional<std::size_t> Basis::index_of(const BasisState& s) const
{
  if (s.n < 1 || s.n > n_max_ || s.l < 0 || s.l >= s.n || std::abs(s.m) > s.l) return std::nullopt;
  return dimension(s.n - 1) + static_cast<std::size_t>(s.l * s.l + s.m + s.l);
}

Basis build_basis(int n_max) { return Basis(n_max); }

double closed_form_coefficient(CoefficientKind kind, int n, int l, int m)
{
  auto fail = [&](const char* what) {
    std::ostringstream os;
    os << what << " coefficient outside its range (n=" << n << ", l=" << l << ", m=" << m << ")";
    throw std::out_of_range(os.str());
  };
  const double denom = (2.0 * l - 1.0) * (2.0 * l + 1.0);
  switch (kind) {
  case CoefficientKind::Alpha:
    if (l < 0 || std::abs(m) > l) fail("alpha");
    return std::sqrt(static_cast<double>((l - m) * (l + m)));
  case CoefficientKind::C:
    if (l < 1 || l > n) fail("c");
    return std::sqrt((n - l) * (n + l) / denom);
  case CoefficientKind::U:
    if (l < 1 || l > n) fail("u");
    return 0.5 * std::sqrt((n + l - 1) * (n + l) / denom);
  case CoefficientKind::V:
    if (l < 1 || l > n + 1) fail("v");
    return 0.5 * std::sqrt((n - l) * (n - l + 1) / denom);
  }
  fail("unknown");
  return 0.0;
}

double CoefficientTables::omega_rot(int l, int m) const { return lookup(omega_rot_, l, m, "omega_rot"); }
double CoefficientTables::beta(int l, int m) const { return lookup(beta_, l, m, "beta"); }
double CoefficientTables::gamma(int l, int m) const { return lookup(gamma_, l, m, "gamma"); }
double CoefficientTables::omega_rad(int n, int l) const { return lookup(omega_rad_, n, l, "omega_rad"); }
double CoefficientTables::omega_rad_lower(int n, int l) const
{
  return lookup(omega_rad_lower_, n, l, "omega_rad_lower");
}

CoefficientTables derive_ladder_coefficients(int n_max)
{
  if (n_max < 3) throw std::invalid_argument("derive_ladder_coefficients: n_max must be at least 3");
  if (n_max > kMaxDenseNMax) throw std::invalid_argument("derive_ladder_coefficients: n_max above dense limit");

  CoefficientTables t;
  t.n_max_ = n_max;

  // (a) Rotational ladder. With x_m = |<m+1|L+|m>|^2 and L- = L+^dagger,
  // [L+, L-]|m> = (x_{m-1} - x_m)|m> = 2m|m>. Start from the top state
  // (x_l = 0) and recurse down; x_{-l-1} must come out zero.
  for (int l = 0; l < n_max; ++l) {
    std::map<int, double> x{{l, 0.0}};
    for (int m = l; m >= -l; --m) x[m - 1] = x[m] + 2.0 * m;
    t.boundary_residual = std::max(t.boundary_residual, std::abs(x[-l - 1]));
    for (const auto& [m, v] : x) t.omega_rot_[{l, m}] = m == -l - 1 ? 0.0 : checked_sqrt(v, "omega_rot");

    if (l >= 1) {
      const std::array<double, 3> ms{double(l), double(l - 1), double(l - 2)};
      const std::array<double, 3> ys{x[l], x[l - 1], x[l - 2]};
      for (int m = -l; m <= l; ++m)
        t.index_negation_residual = std::max(t.index_negation_residual, std::abs(lagrange3(ms, ys, -m) - x[m - 1]));
    }
  }

  // (b) beta and gamma from A+ = [A3, L+], the (+)-component of [L, A] = iA.
  // Matrix elements of the commutator on |n l m>, divided by the printed c:
  //   <l-1, m+1| : omega_rot(l, m) alpha(l, m+1) - alpha(l, m) omega_rot(l-1, m)  = beta(l-1, m)
  //   <l+1, m+1| : omega_rot(l, m) alpha(l+1, m+1) - alpha(l+1, m) omega_rot(l+1, m) = -gamma(l+1, m)
  for (int lp = 0; lp <= n_max - 2; ++lp)
    for (int m = -lp - 1; m <= lp - 1; ++m) {
      const double v = t.omega_rot(lp + 1, m) * alpha(lp + 1, m + 1) - alpha(lp + 1, m) * t.omega_rot(lp, m);
      t.beta_[{lp, m}] = checked_sqrt(v * std::abs(v), "beta");
    }
  for (int lp = 1; lp <= n_max - 1; ++lp)
    for (int m = -(lp - 1); m <= lp - 1; ++m) {
      const double v = alpha(lp, m) * t.omega_rot(lp, m) - t.omega_rot(lp - 1, m) * alpha(lp, m + 1);
      t.gamma_[{lp, m}] = checked_sqrt(v * std::abs(v), "gamma");
    }

  // (c) Radial ladder. With y_n = |<n+1|T+|n>|^2 and T- = T+^dagger,
  // [T+, T-]|n> = (y_{n-1} - y_n)|n> = -2n|n>. T- annihilates the lowest
  // shell n = l + 1, so y_l = 0.
  for (int l = 0; l < n_max; ++l) {
    std::map<int, double> y{{l, 0.0}};
    for (int n = l + 1; n <= n_max; ++n) y[n] = y[n - 1] + 2.0 * n;
    for (int n = l + 1; n <= n_max; ++n) {
      t.omega_rad_[{n, l}] = checked_sqrt(y[n], "omega_rad");
      t.omega_rad_lower_[{n, l}] = checked_sqrt(y[n - 1], "omega_rad");
    }
    if (n_max - l >= 3) {
      const std::array<double, 3> ns{double(l + 1), double(l + 2), double(l + 3)};
      const std::array<double, 3> ys{y[l + 1], y[l + 2], y[l + 3]};
      for (int n = l + 1; n <= n_max; ++n)
        t.index_negation_residual = std::max(t.index_negation_residual, std::abs(lagrange3(ns, ys, -n) - y[n - 1]));
    }
  }

  if (t.boundary_residual > 1e-10) throw ConstraintError("rotational ladder does not close at m = -l");

  // Validate the solved tables against the relations they came from.
  const Basis basis(n_max);
  const LadderOperators lad = build_ladders(basis, t);
  double res = 0.0;
  res = std::max(res, max_abs(commutator(lad.l3, lad.l_plus) - lad.l_plus));
  res = std::max(res, max_abs(commutator(lad.l_plus, lad.l_minus) - 2.0 * lad.l3));
  const auto x = all_matrices(lad);
  const std::size_t all = basis.dim();
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b) res = std::max(res, table_residual(x, generator_at(a), generator_at(b), all));
  const std::size_t below_top = prefix_size(n_max - 1);
  res = std::max(res, block_max(commutator(lad.d, lad.t_plus) - lad.t_plus, below_top));
  res = std::max(res, block_max(commutator(lad.d, lad.t_minus) + lad.t_minus, below_top));
  res = std::max(res, block_max(commutator(lad.t_plus, lad.t_minus) + 2.0 * lad.d, below_top));
  t.validation_residual = res;
  if (res > 1e-10) {
    std::ostringstream os;
    os << "derived ladder coefficients fail validation, residual " << res;
    throw ConstraintError(os.str());
  }
  return t;
}

std::string to_string(SymmetryTag tag)
{
  switch (tag) {
  case SymmetryTag::Hermitian: return "hermitian";
  case SymmetryTag::SkewHermitian: return "skew-hermitian";
  case SymmetryTag::Unitary: return "unitary";
  case SymmetryTag::None: break;
  }
  return "none";
}

double max_abs(const MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
double hermiticity_defect(const MatrixXcd& m) { return max_abs(m - m.adjoint()); }
double skew_defect(const MatrixXcd& m) { return max_abs(m + m.adjoint()); }
double unitarity_defect(const MatrixXcd& m)
{
  return max_abs(m.adjoint() * m - MatrixXcd::Identity(m.rows(), m.cols()));
}

OperatorMatrix OperatorMatrix::hermitian(MatrixXcd m, double tol)
{
  if (const double d = hermiticity_defect(m); d >= tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian, defect " << d;
    throw SymmetryError(os.str());
  }
  return {std::move(m), SymmetryTag::Hermitian};
}

OperatorMatrix OperatorMatrix::skew_hermitian(MatrixXcd m, double tol)
{
  if (const double d = skew_defect(m); d >= tol) {
    std::ostringstream os;
    os << "matrix is not skew-Hermitian, defect " << d;
    throw SymmetryError(os.str());
  }
  return {std::move(m), SymmetryTag::SkewHermitian};
}

OperatorMatrix OperatorMatrix::unitary(MatrixXcd m, double tol)
{
  if (const double d = unitarity_defect(m); d >= tol) {
    std::ostringstream os;
    os << "matrix is not unitary, defect " << d;
    throw SymmetryError(os.str());
  }
  return {std::move(m), SymmetryTag::Unitary};
}

OperatorMatrix OperatorMatrix::untagged(MatrixXcd m) { return {std::move(m), SymmetryTag::None}; }

LadderOperators build_ladders(const Basis& basis, const CoefficientTables& t)
{
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  auto zero = [dim] { return MatrixXcd::Zero(dim, dim); };
  LadderOperators lad{zero(), zero(), zero(), zero(), zero(), zero(), zero(), zero(),
                      zero(), zero(), zero(), zero(), zero(), zero(), zero()};

  using CK = CoefficientKind;
  auto c = [](int n, int l) { return closed_form_coefficient(CK::C, n, l); };
  auto u = [](int n, int l) { return closed_form_coefficient(CK::U, n, l); };
  auto v = [](int n, int l) { return closed_form_coefficient(CK::V, n, l); };

  for (std::size_t src = 0; src < basis.dim(); ++src) {
    const auto [n, l, m] = basis[src];
    const auto col = static_cast<Eigen::Index>(src);
    // Coefficients are only evaluated when the target ket exists.
    auto put = [&](MatrixXcd& mat, BasisState target, cplx phase, auto&& coeff) {
      if (const auto row = basis.index_of(target)) mat(static_cast<Eigen::Index>(*row), col) += phase * coeff();
    };

    lad.l3(col, col) = m;
    put(lad.l_plus, {n, l, m + 1}, 1.0, [&] { return t.omega_rot(l, m); });
    put(lad.l_minus, {n, l, m - 1}, 1.0, [&] { return t.omega_rot(l, -m); });

    put(lad.a3, {n, l - 1, m}, 1.0, [&] { return alpha(l, m) * c(n, l); });
    put(lad.a3, {n, l + 1, m}, 1.0, [&] { return alpha(l + 1, m) * c(n, l + 1); });
    put(lad.a_plus, {n, l - 1, m + 1}, 1.0, [&] { return t.beta(l - 1, m) * c(n, l); });
    put(lad.a_plus, {n, l + 1, m + 1}, -1.0, [&] { return t.gamma(l + 1, m) * c(n, l + 1); });
    put(lad.a_minus, {n, l - 1, m - 1}, -1.0, [&] { return t.beta(l - 1, -m) * c(n, l); });
    put(lad.a_minus, {n, l + 1, m - 1}, 1.0, [&] { return t.gamma(l + 1, -m) * c(n, l + 1); });

    // B and Gamma share magnitudes; Gamma carries -i on n-lowering and +i on
    // n-raising terms, with the printed extra signs on the +/- components.
    // Third components.
    put(lad.b3, {n - 1, l - 1, m}, 1.0, [&] { return alpha(l, m) * u(n, l); });
    put(lad.b3, {n + 1, l - 1, m}, 1.0, [&] { return alpha(l, m) * v(n, l); });
    put(lad.b3, {n - 1, l + 1, m}, 1.0, [&] { return alpha(l + 1, m) * v(n - 1, l + 1); });
    put(lad.b3, {n + 1, l + 1, m}, 1.0, [&] { return alpha(l + 1, m) * u(n + 1, l + 1); });
    put(lad.g3, {n - 1, l - 1, m}, -kI, [&] { return alpha(l, m) * u(n, l); });
    put(lad.g3, {n + 1, l - 1, m}, kI, [&] { return alpha(l, m) * v(n, l); });
    put(lad.g3, {n - 1, l + 1, m}, -kI, [&] { return alpha(l + 1, m) * v(n - 1, l + 1); });
    put(lad.g3, {n + 1, l + 1, m}, kI, [&] { return alpha(l + 1, m) * u(n + 1, l + 1); });

    // Raising components.
    put(lad.b_plus, {n - 1, l - 1, m + 1}, 1.0, [&] { return t.beta(l - 1, m) * u(n, l); });
    put(lad.b_plus, {n + 1, l - 1, m + 1}, 1.0, [&] { return t.beta(l - 1, m) * v(n, l); });
    put(lad.b_plus, {n - 1, l + 1, m + 1}, -1.0, [&] { return t.gamma(l + 1, m) * v(n - 1, l + 1); });
    put(lad.b_plus, {n + 1, l + 1, m + 1}, -1.0, [&] { return t.gamma(l + 1, m) * u(n + 1, l + 1); });
    put(lad.g_plus, {n - 1, l - 1, m + 1}, -kI, [&] { return t.beta(l - 1, m) * u(n, l); });
    put(lad.g_plus, {n + 1, l - 1, m + 1}, kI, [&] { return t.beta(l - 1, m) * v(n, l); });
    put(lad.g_plus, {n - 1, l + 1, m + 1}, kI, [&] { return t.gamma(l + 1, m) * v(n - 1, l + 1); });
    put(lad.g_plus, {n + 1, l + 1, m + 1}, -kI, [&] { return t.gamma(l + 1, m) * u(n + 1, l + 1); });

    // Lowering components.
    put(lad.b_minus, {n - 1, l - 1, m - 1}, -1.0, [&] { return t.beta(l - 1, -m) * u(n, l); });
    put(lad.b_minus, {n + 1, l - 1, m - 1}, -1.0, [&] { return t.beta(l - 1, -m) * v(n, l); });
    put(lad.b_minus, {n - 1, l + 1, m - 1}, 1.0, [&] { return t.gamma(l + 1, -m) * v(n - 1, l + 1); });
    put(lad.b_minus, {n + 1, l + 1, m - 1}, 1.0, [&] { return t.gamma(l + 1, -m) * u(n + 1, l + 1); });
    put(lad.g_minus, {n - 1, l - 1, m - 1}, kI, [&] { return t.beta(l - 1, -m) * u(n, l); });
    put(lad.g_minus, {n + 1, l - 1, m - 1}, -kI, [&] { return t.beta(l - 1, -m) * v(n, l); });
    put(lad.g_minus, {n - 1, l + 1, m - 1}, -kI, [&] { return t.gamma(l + 1, -m) * v(n - 1, l + 1); });
    put(lad.g_minus, {n + 1, l + 1, m - 1}, kI, [&] { return t.gamma(l + 1, -m) * u(n + 1, l + 1); });

    lad.d(col, col) = n;
    put(lad.t_plus, {n + 1, l, m}, 1.0, [&] { return t.omega_rad(n, l); });
    put(lad.t_minus, {n - 1, l, m}, 1.0, [&] { return t.omega_rad_lower(n, l); });
  }
  return lad;
}

OperatorMatrix build_generator_matrix(GeneratorId g, int n_max, const CoefficientTables& tables)
{
  if (tables.n_max() != n_max) throw std::invalid_argument("coefficient tables were derived for another n_max");
  const Basis basis(n_max);
  auto all = all_matrices(build_ladders(basis, tables));
  return OperatorMatrix::hermitian(std::move(all[index(g)]));
}

OperatorMatrix build_hamiltonian(int n_max)
{
  const Basis basis(n_max);
  Eigen::VectorXcd diag(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const double n = basis[i].n;
    diag(static_cast<Eigen::Index>(i)) = -1.0 / (2.0 * n * n);
  }
  return OperatorMatrix::hermitian(diag.asDiagonal().toDenseMatrix());
}

RepSet build_rep(int n_max)
{
  RepSet rep;
  rep.n_max = n_max;
  rep.tables = derive_ladder_coefficients(n_max);
  rep.basis = Basis(n_max);
  auto all = all_matrices(build_ladders(rep.basis, rep.tables));
  for (std::size_t i = 0; i < kNumGenerators; ++i) rep.generators[i] = OperatorMatrix::hermitian(std::move(all[i]));
  rep.hamiltonian = build_hamiltonian(n_max);
  rep.interior_dim = prefix_size(n_max - 2);
  rep.interior_projector = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rep.basis.dim()));
  rep.interior_projector.head(static_cast<Eigen::Index>(rep.interior_dim)).setOnes();
  return rep;
}

namespace {

std::array<MatrixXcd, kNumGenerators> generator_entries(const RepSet& rep)
{
  std::array<MatrixXcd, kNumGenerators> x;
  for (std::size_t i = 0; i < kNumGenerators; ++i) x[i] = rep.generators[i].entries();
  return x;
}

} // namespace

double commutator_residual(const RepSet& rep, GeneratorId a, GeneratorId b, bool project)
{
  const auto x = generator_entries(rep);
  return table_residual(x, a, b, project ? rep.interior_dim : rep.basis.dim());
}

ResidualReport check_commutators(const RepSet& rep, double tol, bool project)
{
  const auto x = generator_entries(rep);
  const std::size_t k = project ? rep.interior_dim : rep.basis.dim();
  ResidualReport out;
  out.tolerance = tol;
  for (std::size_t a = 0; a < kNumGenerators; ++a)
    for (std::size_t b = a + 1; b < kNumGenerators; ++b) {
      const double r = table_residual(x, generator_at(a), generator_at(b), k);
      out.pairs.push_back({generator_at(a), generator_at(b), r});
      out.max_residual = std::max(out.max_residual, r);
    }
  out.passed = out.max_residual < tol;
  return out;
}

double max_hermiticity_defect(const RepSet& rep)
{
  double d = 0.0;
  for (const auto& g : rep.generators) d = std::max(d, hermiticity_defect(g.entries()));
  return d;
}

MatrixXcd heisenberg_evolve(const RepSet& rep, const MatrixXcd& g0, double t)
{
  const auto& h = rep.hamiltonian.entries();
  MatrixXcd out = g0;
  for (Eigen::Index j = 0; j < out.rows(); ++j)
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
      if (out(j, k) == cplx(0.0)) continue;
      const double de = h(j, j).real() - h(k, k).real();
      out(j, k) *= std::exp(cplx(0.0, -de * t));
    }
  return out;
}

OperatorMatrix heisenberg_generator(const RepSet& rep, GeneratorId g, double t)
{
  return OperatorMatrix::hermitian(heisenberg_evolve(rep, rep[g], t));
}

MatrixXcd l_squared(const RepSet& rep)
{
  using G = GeneratorId;
  return rep[G::L1] * rep[G::L1] + rep[G::L2] * rep[G::L2] + rep[G::L3] * rep[G::L3];
}

MatrixXcd a_squared(const RepSet& rep)
{
  using G = GeneratorId;
  return rep[G::A1] * rep[G::A1] + rep[G::A2] * rep[G::A2] + rep[G::A3] * rep[G::A3];
}

CasimirReport casimir_check(const RepSet& rep, double tol)
{
  using G = GeneratorId;
  const auto dim = static_cast<Eigen::Index>(rep.basis.dim());
  MatrixXcd l_dot_a = MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < 3; ++i) {
    const auto& l = rep[generator_at(index(G::L1) + i)];
    const auto& a = rep[generator_at(index(G::A1) + i)];
    l_dot_a += l * a + a * l;
  }
  const auto& d = rep[G::D];
  const MatrixXcd quad = l_squared(rep) + a_squared(rep) - d * d + MatrixXcd::Identity(dim, dim);

  CasimirReport out;
  out.tolerance = tol;
  out.l_dot_a = block_max(l_dot_a, rep.interior_dim);
  out.quadratic = block_max(quad, rep.interior_dim);
  out.passed = out.l_dot_a < tol && out.quadratic < tol;
  return out;
}

} // namespace so42::rep
