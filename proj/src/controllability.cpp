#include "so42/controllability.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "so42/errors.hpp"
#include "so42/simulator.hpp"

namespace so42::control {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

constexpr cplx kI{0.0, 1.0};

MatrixXcd commutator(const MatrixXcd& a, const MatrixXcd& b) { return a * b - b * a; }

MatrixXcd interior(const MatrixXcd& m, std::size_t k)
{
  const auto kk = static_cast<Eigen::Index>(k);
  return m.topLeftCorner(kk, kk);
}

// Real coordinates of a complex matrix block.
Eigen::VectorXd realify(const MatrixXcd& m)
{
  Eigen::VectorXd v(2 * m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    v(i) = m.data()[i].real();
    v(m.size() + i) = m.data()[i].imag();
  }
  return v;
}

// Real span of interior blocks with an orthonormal basis, used for the
// matrix-space parts of the ideal check.
class BlockSpan {
public:
  explicit BlockSpan(std::size_t k) : k_(k) {}

  // Distance of m from the span, relative to max(1, |m|).
  double distance(const MatrixXcd& m) const
  {
    Eigen::VectorXd v = realify(interior(m, k_));
    const double scale = std::max(1.0, v.norm());
    for (const auto& q : basis_) v -= q.dot(v) * q;
    return v.norm() / scale;
  }

  bool insert(const MatrixXcd& m, double tol)
  {
    Eigen::VectorXd v = realify(interior(m, k_));
    const double scale = v.norm();
    if (scale == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis_) v -= q.dot(v) * q;
    if (v.norm() <= tol * scale) return false;
    basis_.push_back(v / v.norm());
    return true;
  }

  std::size_t size() const { return basis_.size(); }

private:
  std::size_t k_;
  std::vector<Eigen::VectorXd> basis_;
};

VectorXcd ground_state(const ControlSystem& sys)
{
  VectorXcd psi = VectorXcd::Zero(sys.dim());
  psi(0) = 1.0;
  return psi;
}

} // namespace

bool ControlSystem::has_control(GeneratorId g) const
{
  return std::any_of(controls.begin(), controls.end(), [g](const ControlTerm& c) { return c.id == g; });
}

std::vector<GeneratorId> ControlSystem::control_ids() const
{
  std::vector<GeneratorId> ids;
  for (const auto& c : controls) ids.push_back(c.id);
  return ids;
}

MatrixXcd ControlSystem::evolve(const MatrixXcd& g0, double t) const
{
  if (!time_dependent || t == 0.0) return g0;
  // e^{H't} G e^{-H't} with diagonal H' = diag(d): entries scale by e^{(d_j - d_k) t}.
  const auto& d = drift.entries();
  MatrixXcd out = g0;
  for (Eigen::Index j = 0; j < out.rows(); ++j)
    for (Eigen::Index k = 0; k < out.cols(); ++k)
      if (out(j, k) != cplx(0.0)) out(j, k) *= std::exp((d(j, j) - d(k, k)) * t);
  return out;
}

void ControlSystem::validate() const
{
  const auto n = dim();
  const auto& d = drift.entries();
  if (d.cols() != n) throw std::invalid_argument("drift must be square");
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j != k && d(j, k) != cplx(0.0)) throw std::invalid_argument("drift must be diagonal");
      if (j == k && std::abs(d(j, j).real()) > 1e-12)
        throw std::invalid_argument("drift diagonal must be purely imaginary");
    }
  for (const auto& c : controls)
    if (c.matrix.dim() != n || c.matrix.entries().cols() != n)
      throw std::invalid_argument("control matrix dimension differs from the drift");
  for (const auto& r : realization)
    if (r.rows() != n || r.cols() != n) throw std::invalid_argument("realization dimension differs from the drift");
  if (shell.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("shell labels missing");
}

ControlSystem make_system(const rep::RepSet& rep, std::span<const GeneratorId> controls, bool time_dependent)
{
  ControlSystem sys;
  sys.drift = rep::OperatorMatrix::skew_hermitian(-kI * rep.hamiltonian.entries());
  sys.time_dependent = time_dependent;
  sys.n_max = rep.n_max;
  sys.interior_dim = rep.interior_dim;
  for (std::size_t i = 0; i < kNumGenerators; ++i) sys.realization[i] = -kI * rep.generators[i].entries();
  for (const auto& s : rep.basis.states()) sys.shell.push_back(s.n);
  for (auto g : controls) {
    if (sys.has_control(g)) throw std::invalid_argument("duplicate control " + std::string(name(g)));
    sys.controls.push_back({g, rep::OperatorMatrix::skew_hermitian(sys.realization[index(g)])});
  }
  sys.validate();
  return sys;
}

std::vector<GeneratorId> parse_control_list(const std::string& text)
{
  std::string lowered;
  for (char ch : text) lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lowered == "all") {
    const auto all = all_generators();
    return {all.begin(), all.end()};
  }
  std::vector<GeneratorId> out;
  if (text.empty() || lowered == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto g = parse_generator(item);
    if (!g) throw std::invalid_argument("unknown generator: " + item);
    if (std::find(out.begin(), out.end(), *g) != out.end())
      throw std::invalid_argument("duplicate generator: " + item);
    out.push_back(*g);
  }
  return out;
}

std::vector<GeneratorId> reduced_controls()
{
  using G = GeneratorId;
  return {G::L1, G::L2, G::A3, G::S, G::C};
}

MatrixXcd realize(const ControlSystem& sys, const AlgebraElement& x)
{
  MatrixXcd out = MatrixXcd::Zero(sys.dim(), sys.dim());
  for (std::size_t i = 0; i < kNumGenerators; ++i)
    if (x.coeffs[i] != Rational(0)) out += boost::rational_cast<double>(x.coeffs[i]) * sys.realization[i];
  return out;
}

LieSpan lie_span_controls(const ControlSystem& sys)
{
  if (sys.controls.empty()) throw std::invalid_argument("lie_span_controls: at least one control required");
  const auto ids = sys.control_ids();
  const auto seeds = basis_elements(ids);
  LieSpan out;
  out.abstract = generated_subalgebra_exact(seeds);
  for (const auto& b : out.abstract.basis) out.matrices.push_back(realize(sys, b));
  return out;
}

double b1_residual(const ControlSystem& sys, double t, double h)
{
  if (!(h > 0.0)) throw std::invalid_argument("b1_residual: step h must be positive");
  if (sys.controls.empty()) return 0.0;
  const auto span = lie_span_controls(sys);
  const MatrixXcd& hd = sys.drift.entries();
  double worst = 0.0;
  for (const auto& g0 : span.matrices) {
    const MatrixXcd dgdt = (sys.evolve(g0, t + h) - sys.evolve(g0, t - h)) / (2.0 * h);
    worst = std::max(worst, rep::max_abs(dgdt - commutator(hd, sys.evolve(g0, t))));
  }
  return worst;
}

namespace {

// [B, B] in span(B): exactly in the abstract algebra, and for the matrices on
// the interior block where the truncated realization is a homomorphism.
bool conforming_ideal(const ControlSystem& sys, const LieSpan& span)
{
  const auto& basis = span.abstract.basis;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const auto z = bracket(basis[i], basis[j]);
      if (!in_span_exact(basis, z)) return false;
      const MatrixXcd diff = commutator(span.matrices[i], span.matrices[j]) - realize(sys, z);
      if (rep::max_abs(interior(diff, sys.interior_dim)) > kIdealTolerance) return false;
    }
  return true;
}

// Generic path: C = L(B, B1, B2, ...) with B_{k+1} = -[H', B_k] (constant
// generators); every new element c of C must satisfy [B, c] in span(B).
bool generic_ideal(const ControlSystem& sys, const LieSpan& span)
{
  const std::size_t k = sys.interior_dim;
  BlockSpan b_span(k);
  for (const auto& m : span.matrices) b_span.insert(m, kIdealTolerance);

  auto bracket_ok = [&](const MatrixXcd& c) {
    for (const auto& b : span.matrices)
      if (b_span.distance(commutator(b, c)) > kIdealTolerance) return false;
    return true;
  };

  BlockSpan c_span(k);
  std::vector<MatrixXcd> c_members;
  auto add = [&](const MatrixXcd& m) {
    if (!c_span.insert(m, kIdealTolerance)) return true;
    c_members.push_back(m);
    return bracket_ok(m);
  };

  const MatrixXcd& hd = sys.drift.entries();
  for (const auto& m : span.matrices) {
    if (!add(m)) return false;
    MatrixXcd bk = m;
    for (int depth = 0; depth < kMaxClosureDepth; ++depth) {
      bk = -commutator(hd, bk);
      if (rep::max_abs(bk) < kIdealTolerance) break;
      if (!add(bk)) return false;
    }
  }
  for (int round = 0; round < kMaxClosureDepth; ++round) {
    const std::size_t before = c_members.size();
    for (std::size_t i = 0; i < before; ++i)
      for (std::size_t j = i + 1; j < before; ++j)
        if (!add(commutator(c_members[i], c_members[j]))) return false;
    if (c_members.size() == before) break;
  }
  return true;
}

} // namespace

bool check_ideal_condition(const ControlSystem& sys)
{
  if (sys.controls.empty()) return true; // [0, C] = 0
  const auto span = lie_span_controls(sys);
  if (b1_residual(sys, 0.7, 1e-5) < kB1Tolerance) return conforming_ideal(sys, span);
  return generic_ideal(sys, span);
}

std::vector<MatrixXcd> c_basis(const ControlSystem& sys, double t)
{
  if (sys.controls.empty()) return {};
  auto span = lie_span_controls(sys);
  for (auto& m : span.matrices) m = sys.evolve(m, t);
  if (!sys.time_dependent) {
    // Nonconforming: extend by the B_k chain and close in matrix space.
    BlockSpan s(static_cast<std::size_t>(sys.dim()));
    std::vector<MatrixXcd> out;
    auto add = [&](const MatrixXcd& m) {
      if (s.insert(m, kIdealTolerance)) out.push_back(m);
    };
    for (const auto& m : span.matrices) add(m);
    const MatrixXcd& hd = sys.drift.entries();
    for (const auto& m : span.matrices) {
      MatrixXcd bk = m;
      for (int depth = 0; depth < kMaxClosureDepth; ++depth) {
        bk = -commutator(hd, bk);
        if (rep::max_abs(bk) < kIdealTolerance) break;
        add(bk);
      }
    }
    for (int round = 0; round < kMaxClosureDepth; ++round) {
      const std::size_t before = out.size();
      for (std::size_t i = 0; i < before; ++i)
        for (std::size_t j = i + 1; j < before; ++j) add(commutator(out[i], out[j]));
      if (out.size() == before) break;
    }
    return out;
  }
  return span.matrices;
}

OrbitRank orbit_rank(const ControlSystem& sys, const VectorXcd& psi, double tol_ratio, double t)
{
  if (psi.size() != sys.dim()) throw std::invalid_argument("orbit_rank: state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("orbit_rank: state must be normalized");
  OrbitRank out;
  const auto basis = c_basis(sys, t);
  if (basis.empty()) return out;

  const auto n = sys.dim();
  Eigen::MatrixXd cols(2 * n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const VectorXcd v = basis[j] * psi;
    cols.col(static_cast<Eigen::Index>(j)) << v.real(), v.imag();
  }
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(cols).singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());

  // Everything at round-off level of the largest column counts as zero.
  const double col_scale = cols.colwise().norm().maxCoeff();
  const double floor = 1e-13 * std::max(1.0, col_scale);
  if (s(0) <= floor) {
    out.rank = 0;
    out.gap = std::numeric_limits<double>::infinity();
    return out;
  }

  // Candidate cuts: after position r (1 <= r <= size); r == size keeps all.
  int best = -1;
  double best_ratio = 0.0;
  for (Eigen::Index r = 1; r < s.size(); ++r) {
    const double ratio = s(r - 1) / std::max(s(r), std::numeric_limits<double>::min());
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = static_cast<int>(r);
    }
  }
  const double spread = s(0) / s(s.size() - 1);
  if (best_ratio >= tol_ratio) {
    out.rank = best;
    out.gap = best_ratio;
  } else if (spread < tol_ratio) {
    // No discarded values: full column rank with a well-conditioned spread.
    out.rank = static_cast<int>(s.size());
    out.gap = std::numeric_limits<double>::infinity();
  } else {
    std::ostringstream os;
    os << "orbit rank ambiguous: largest singular-value gap " << best_ratio << " below " << tol_ratio;
    throw RankAmbiguous(os.str());
  }
  return out;
}

int orbit_dimension(const ControlSystem& sys, const VectorXcd& psi, double tol_ratio, double t)
{
  return orbit_rank(sys, psi, tol_ratio, t).rank;
}

std::vector<VectorXcd> orbit_probes(const ControlSystem& sys, const VectorXcd& psi, int count, std::uint64_t seed,
                                    const ProbeOptions& opt)
{
  std::vector<VectorXcd> out;
  if (sys.controls.empty() || count <= 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nseg(opt.min_segments, opt.max_segments);
  std::uniform_real_distribution<double> amp(-opt.amplitude, opt.amplitude);
  const auto n = sys.dim();
  const auto k = static_cast<Eigen::Index>(sys.interior_dim);

  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > opt.max_attempts) throw std::runtime_error("orbit_probes: could not keep probes in the interior");
    VectorXcd phi = psi;
    const int segments = nseg(rng);
    for (int s = 0; s < segments; ++s) {
      MatrixXcd kmat = MatrixXcd::Zero(n, n);
      for (const auto& c : sys.controls) kmat += amp(rng) * c.matrix.entries();
      phi = sim::matrix_exponential(rep::OperatorMatrix::skew_hermitian(opt.segment_duration * kmat)).entries() * phi;
    }
    if (phi.head(k).squaredNorm() >= opt.interior_population) out.push_back(phi / phi.norm());
  }
  return out;
}

ControllabilityReport controllability_report(const ControlSystem& sys, int probes, std::uint64_t seed)
{
  ControllabilityReport r;
  r.probes = probes;
  r.seed = seed;
  if (sys.controls.empty()) {
    r.orbit_dim = 0;
    r.ideal_condition_ok = true;
    r.orbit_constant = true;
    r.verdict = "not-satisfied";
    return r;
  }

  const auto span = lie_span_controls(sys);
  r.lie_dim = span.abstract.dim;
  r.lie_depth = span.abstract.depth;
  r.b1_residual = b1_residual(sys, 0.7, 1e-5);
  r.ideal_condition_ok = check_ideal_condition(sys);

  const VectorXcd psi0 = ground_state(sys);
  r.rank_gap = std::numeric_limits<double>::infinity();
  try {
    const auto base = orbit_rank(sys, psi0);
    r.orbit_dim = base.rank;
    r.rank_gap = base.gap;
    r.orbit_constant = true;
    for (const auto& p : orbit_probes(sys, psi0, probes, seed)) {
      const auto pr = orbit_rank(sys, p);
      r.probe_dims.push_back(pr.rank);
      r.rank_gap = std::min(r.rank_gap, pr.gap);
      if (pr.rank != r.orbit_dim) r.orbit_constant = false;
    }
  } catch (const RankAmbiguous&) {
    r.rank_ambiguous = true;
    r.orbit_constant = false;
  }

  const bool ok = r.b1_residual < kB1Tolerance && r.ideal_condition_ok && r.orbit_constant && !r.rank_ambiguous &&
                  r.orbit_dim > 0;
  r.verdict = ok ? "conditions-satisfied" : "not-satisfied";
  return r;
}

} // namespace so42::control
