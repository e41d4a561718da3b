#include "so42/classical.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Geometry>

#include "so42/algebra.hpp"
#include "so42/errors.hpp"

namespace so42::classical {

namespace {

using Vec3 = Eigen::Vector3d;
using Jacobian = Eigen::Matrix<double, kNumGenerators, 6>;

double energy_factor(EnergySign sign, double h) { return sign == EnergySign::Negative ? -2.0 * h : 2.0 * h; }

PhasePoint shifted(const PhasePoint& x, int coord, double delta)
{
  PhasePoint y = x;
  if (coord < 3)
    y.r(coord) += delta;
  else
    y.p(coord - 3) += delta;
  return y;
}

Jacobian central_jacobian(EnergySign sign, RadialTerm radial, const PhasePoint& x, double h, double r_min)
{
  Jacobian j;
  for (int c = 0; c < 6; ++c) {
    const auto plus = evaluate_all(sign, radial, shifted(x, c, h), r_min);
    const auto minus = evaluate_all(sign, radial, shifted(x, c, -h), r_min);
    for (std::size_t g = 0; g < kNumGenerators; ++g) j(g, c) = (plus[g] - minus[g]) / (2.0 * h);
  }
  return j;
}

Eigen::Matrix<double, 6, 1> gradient(const RealizationFn& fn, const PhasePoint& x, const DerivativeOptions& opt)
{
  const auto row = jacobian(fn.energy_sign, fn.radial_term, x, opt).row(index(fn.generator));
  return fn.sign * row.transpose();
}

double time_derivative(const RealizationFn& fn, const PhasePoint& x, const DerivativeOptions& opt)
{
  auto central = [&](double h) {
    PhasePoint a = x, b = x;
    a.t += h;
    b.t -= h;
    return (eval_generator(fn, a) - eval_generator(fn, b)) / (2.0 * h);
  };
  if (!opt.richardson) return central(opt.h);
  return (4.0 * central(opt.h / 2.0) - central(opt.h)) / 3.0;
}

// H-commutator partners: [H, G] = kappa (-/+2H)^{3/2} i P, i.e.
// dG/dt (explicit) = kappa (-/+2H)^{3/2} P.
struct Partner {
  int kappa;
  GeneratorId partner;
};

Partner h_partner(EnergySign sign, GeneratorId g)
{
  const auto [family, comp] = parts(g);
  auto vec = [&](int offset) { return generator_at(offset + comp - 1); };
  if (sign == EnergySign::Negative) {
    switch (family) {
    case 'B': return {+1, vec(9)};
    case 'G': return {-1, vec(6)};
    case 'S': return {+1, GeneratorId::C};
    case 'C': return {-1, GeneratorId::S};
    default: return {0, g};
    }
  }
  switch (family) {
  case 'A': return {-1, vec(9)};
  case 'G': return {-1, vec(3)};
  case 'S': return {+1, GeneratorId::D};
  case 'D': return {+1, GeneratorId::S};
  default: return {0, g};
  }
}

bool stencil_admissible(EnergySign sign, const PhasePoint& x, double h, double r_min, double energy_gap)
{
  for (int c = -1; c < 6; ++c)
    for (double d : {-h, h}) {
      const PhasePoint y = c < 0 ? x : shifted(x, c, d);
      if (y.r.norm() <= r_min) return false;
      const double e = hamiltonian(y);
      if (sign == EnergySign::Negative ? e > -energy_gap : e < energy_gap) return false;
    }
  return true;
}

} // namespace

std::string to_string(EnergySign s) { return s == EnergySign::Negative ? "negative" : "positive"; }
std::string to_string(RadialTerm t) { return t == RadialTerm::Minus ? "minus_r_over_r" : "plus_r_over_r"; }

double hamiltonian(const PhasePoint& x) { return 0.5 * x.p.squaredNorm() - 1.0 / x.r.norm(); }

double zeta(EnergySign sign, const PhasePoint& x)
{
  const double k = std::sqrt(energy_factor(sign, hamiltonian(x)));
  const double rp = x.r.dot(x.p);
  const double k3t = k * k * k * x.t;
  return sign == EnergySign::Negative ? k * rp + k3t : k * rp - k3t;
}

void require_admissible(EnergySign sign, const PhasePoint& x, double r_min)
{
  if (!(x.r.norm() > r_min)) {
    std::ostringstream os;
    os << "|r| = " << x.r.norm() << " not above r_min = " << r_min;
    throw DomainError(os.str());
  }
  const double e = hamiltonian(x);
  if (sign == EnergySign::Negative ? !(e < 0.0) : !(e > 0.0)) {
    std::ostringstream os;
    os << "H = " << e << " has the wrong sign for the " << to_string(sign) << "-energy realization";
    throw DomainError(os.str());
  }
}

std::array<double, kNumGenerators> evaluate_all(EnergySign sign, RadialTerm radial, const PhasePoint& x,
                                                double r_min)
{
  require_admissible(sign, x, r_min);

  const Vec3& r = x.r;
  const Vec3& p = x.p;
  const double rn = r.norm();
  const double e = hamiltonian(x);
  const double k = std::sqrt(energy_factor(sign, e));
  const double inv_k = 1.0 / k;
  const double rp = r.dot(p);
  const double z = zeta(sign, x);
  const double radial_sign = radial == RadialTerm::Plus ? 1.0 : -1.0;

  const Vec3 l = r.cross(p);
  const Vec3 rhat = r / rn;
  // Classical readings of the symmetrized products: (L x p - p x L)/2 -> L x p,
  // (p r + r p)/2 -> r p, (p (r.p) + (p.r) p)/2 -> (r.p) p.
  const Vec3 lenz = inv_k * (l.cross(p) + radial_sign * rhat);
  const Vec3 pr = rn * p;
  const Vec3 prp = inv_k * rp * p;
  const Vec3 rk = inv_k * rhat;

  Vec3 a, b, g;
  double s, c, d;
  if (sign == EnergySign::Negative) {
    const double cz = std::cos(z), sz = std::sin(z);
    const double w = inv_k * (1.0 + 2.0 * e * rn);
    a = lenz;
    b = pr * cz - prp * sz + rk * sz;
    g = -pr * sz - prp * cz + rk * cz;
    s = -rp * sz - w * cz;
    c = -rp * cz + w * sz;
    d = inv_k;
  } else {
    const double ch = std::cosh(z), sh = std::sinh(z);
    const double w = inv_k * (2.0 * e * rn + 1.0);
    a = pr * sh - prp * ch + rk * ch;
    b = lenz;
    g = pr * ch - prp * sh + rk * sh;
    s = w * sh - rp * ch;
    d = rp * sh - w * ch;
    c = inv_k;
  }

  return {l(0), l(1), l(2), a(0), a(1), a(2), b(0), b(1), b(2), g(0), g(1), g(2), s, c, d};
}

double eval_generator(const RealizationFn& fn, const PhasePoint& x, double r_min)
{
  return fn.sign * evaluate_all(fn.energy_sign, fn.radial_term, x, r_min)[index(fn.generator)];
}

Eigen::Matrix<double, kNumGenerators, 6> jacobian(EnergySign sign, RadialTerm radial, const PhasePoint& x,
                                                  const DerivativeOptions& opt, double r_min)
{
  if (!(opt.h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (!opt.richardson) return central_jacobian(sign, radial, x, opt.h, r_min);
  return (4.0 * central_jacobian(sign, radial, x, opt.h / 2.0, r_min) -
          central_jacobian(sign, radial, x, opt.h, r_min)) /
         3.0;
}

double poisson_bracket(const RealizationFn& f, const RealizationFn& g, const PhasePoint& x,
                       const DerivativeOptions& opt)
{
  const auto df = gradient(f, x, opt);
  const auto dg = gradient(g, x, opt);
  return df.head<3>().dot(dg.tail<3>()) - df.tail<3>().dot(dg.head<3>());
}

ScaledValue constant_of_motion_residual(const RealizationFn& fn, const PhasePoint& x, const DerivativeOptions& opt)
{
  const auto df = gradient(fn, x, opt);
  const double rn = x.r.norm();
  Eigen::Matrix<double, 6, 1> dh;
  dh << x.r / (rn * rn * rn), x.p;
  const double bracket_with_h = df.head<3>().dot(dh.tail<3>()) - df.tail<3>().dot(dh.head<3>());
  const double dt = time_derivative(fn, x, opt);
  return {std::abs(dt + bracket_with_h), std::abs(dt) + df.norm() * dh.norm()};
}

double verify_constant_of_motion(const RealizationFn& fn, const PhasePoint& x, const DerivativeOptions& opt)
{
  const auto r = constant_of_motion_residual(fn, x, opt);
  return r.value / std::max(1.0, r.scale);
}

ScaledValue time_derivative_residual(const RealizationFn& fn, const PhasePoint& x, const DerivativeOptions& opt)
{
  RealizationFn printed = fn;
  printed.sign = 1;
  const double dt = time_derivative(printed, x, opt);
  const auto [kappa, partner] = h_partner(fn.energy_sign, fn.generator);
  double expected = 0.0;
  if (kappa != 0) {
    const double k = std::sqrt(energy_factor(fn.energy_sign, hamiltonian(x)));
    RealizationFn pfn = printed;
    pfn.generator = partner;
    expected = kappa * k * k * k * eval_generator(pfn, x);
  }
  return {std::abs(dt - expected), std::max(std::abs(dt), std::abs(expected))};
}

SampleBatch sample_points(EnergySign sign, std::size_t n, std::uint64_t seed, const SamplingOptions& opt)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(-opt.r_box, opt.r_box);
  std::uniform_real_distribution<double> up(-opt.p_box, opt.p_box);
  std::uniform_real_distribution<double> ut(-opt.t_box, opt.t_box);

  SampleBatch batch;
  const std::size_t max_attempts = 100000 * (n + 1);
  while (batch.points.size() < n) {
    if (batch.points.size() + batch.rejected > max_attempts)
      throw std::runtime_error("sample_points: acceptance rate too low for the requested constraints");
    PhasePoint x;
    x.r = Vec3(ur(rng), ur(rng), ur(rng));
    x.p = Vec3(up(rng), up(rng), up(rng));
    x.t = ut(rng);
    // Richardson steps stay inside [-h, h], so one stencil check covers both.
    if (!stencil_admissible(sign, x, opt.h, opt.r_min, opt.energy_gap) || std::abs(zeta(sign, x)) > opt.zeta_max) {
      ++batch.rejected;
      continue;
    }
    batch.points.push_back(x);
  }
  return batch;
}

namespace {

struct PointData {
  std::array<double, kNumGenerators> values;
  Eigen::Matrix<double, kNumGenerators, kNumGenerators> bracket;
  Eigen::Matrix<double, kNumGenerators, kNumGenerators> scale;
};

PointData point_data(EnergySign sign, RadialTerm radial, const PhasePoint& x, const DerivativeOptions& deriv,
                     double r_min)
{
  PointData d;
  d.values = evaluate_all(sign, radial, x, r_min);
  const Jacobian j = jacobian(sign, radial, x, deriv, r_min);
  const auto jr = j.leftCols<3>();
  const auto jp = j.rightCols<3>();
  d.bracket = jr * jp.transpose() - jp * jr.transpose();
  const Eigen::Matrix<double, kNumGenerators, 1> norms = j.rowwise().norm();
  d.scale = norms * norms.transpose();
  return d;
}

// Seven sign groups: the vector families and the three scalars.
std::array<int, kNumGenerators> signs_from_mask(unsigned mask)
{
  std::array<int, kNumGenerators> s = Realization::filled_signs();
  for (std::size_t i = 0; i < kNumGenerators; ++i) {
    const unsigned group = i < 12 ? static_cast<unsigned>(i / 3) : static_cast<unsigned>(i - 8);
    if (mask >> group & 1u) s[i] = -1;
  }
  return s;
}

// Max scaled residual of a candidate over all points, with early exit once
// `cutoff` is exceeded.
double candidate_residual(const std::vector<PointData>& data, int convention,
                          const std::array<int, kNumGenerators>& s, double cutoff)
{
  const auto& table = StructureTable::so42();
  double worst = 0.0;
  for (const auto& d : data)
    for (std::size_t a = 0; a < kNumGenerators; ++a)
      for (std::size_t b = a + 1; b < kNumGenerators; ++b) {
        double rhs = 0.0;
        for (std::size_t c = 0; c < kNumGenerators; ++c)
          if (int f = table.coefficient(generator_at(a), generator_at(b), generator_at(c)); f != 0)
            rhs += f * s[c] * d.values[c];
        const double lhs = s[a] * s[b] * d.bracket(a, b);
        worst = std::max(worst, std::abs(lhs - convention * rhs) / std::max(1.0, d.scale(a, b)));
        if (worst > cutoff) return worst;
      }
  return worst;
}

} // namespace

RelationReport verify_relations(EnergySign sign, std::size_t n_samples, std::uint64_t seed,
                                const SamplingOptions& sampling, const DerivativeOptions& deriv, double tolerance)
{
  if (n_samples < 1) throw std::invalid_argument("verify_relations: n_samples must be at least 1");

  RelationReport report;
  report.energy_sign = sign;
  report.seed = seed;
  report.n_samples = n_samples;
  report.tolerance = tolerance;

  const SampleBatch batch = sample_points(sign, n_samples, seed, sampling);
  report.rejected = batch.rejected;

  std::array<std::vector<PointData>, 2> data;
  for (RadialTerm radial : {RadialTerm::Minus, RadialTerm::Plus})
    for (const auto& x : batch.points)
      data[static_cast<int>(radial)].push_back(point_data(sign, radial, x, deriv, sampling.r_min));

  // Candidate order: convention +1 before -1, printed radial term before the
  // alternative, then fewest sign flips, then lowest group mask.
  struct Candidate {
    int convention;
    RadialTerm radial;
    unsigned mask;
    double residual;
  };
  std::optional<Candidate> chosen;
  Candidate best{+1, RadialTerm::Minus, 0u, std::numeric_limits<double>::infinity()};
  for (int convention : {+1, -1}) {
    for (RadialTerm radial : {RadialTerm::Minus, RadialTerm::Plus}) {
      for (int flips = 0; flips <= 7 && !chosen; ++flips)
        for (unsigned mask = 0; mask < 128u && !chosen; ++mask) {
          if (std::popcount(mask) != flips) continue;
          const double res = candidate_residual(data[static_cast<int>(radial)], convention,
                                                signs_from_mask(mask), best.residual);
          if (res < best.residual) best = {convention, radial, mask, res};
          if (res < tolerance) chosen = Candidate{convention, radial, mask, res};
        }
      if (chosen) break;
    }
    if (chosen) break;
  }
  const Candidate pick = chosen.value_or(best);
  report.variant_found = chosen.has_value();
  report.convention = pick.convention;
  report.realization = Realization{sign, pick.radial, signs_from_mask(pick.mask), sampling.r_min};
  for (std::size_t i = 0; i < kNumGenerators; ++i)
    if (report.realization.signs[i] < 0) report.flipped.push_back(generator_at(i));

  // Per-relation residuals of the chosen variant.
  const auto& table = StructureTable::so42();
  const auto& s = report.realization.signs;
  for (std::size_t a = 0; a < kNumGenerators; ++a)
    for (std::size_t b = a + 1; b < kNumGenerators; ++b) {
      RelationResidual rel{generator_at(a), generator_at(b)};
      for (const auto& d : data[static_cast<int>(pick.radial)]) {
        double rhs = 0.0;
        for (std::size_t c = 0; c < kNumGenerators; ++c)
          if (int f = table.coefficient(generator_at(a), generator_at(b), generator_at(c)); f != 0)
            rhs += f * s[c] * d.values[c];
        const double diff = std::abs(s[a] * s[b] * d.bracket(a, b) - pick.convention * rhs);
        rel.max_abs = std::max(rel.max_abs, diff);
        rel.max_scaled = std::max(rel.max_scaled, diff / std::max(1.0, d.scale(a, b)));
      }
      report.max_relation_residual = std::max(report.max_relation_residual, rel.max_scaled);
      report.relations.push_back(rel);
    }

  for (std::size_t g = 0; g < kNumGenerators; ++g) {
    const RealizationFn fn = report.realization.fn(generator_at(g));
    double com = 0.0, td = 0.0;
    for (const auto& x : batch.points) {
      const auto c = constant_of_motion_residual(fn, x, deriv);
      com = std::max(com, c.value / std::max(1.0, c.scale));
      const auto t = time_derivative_residual(fn, x, deriv);
      td = std::max(td, t.value / std::max(1.0, t.scale));
    }
    report.constant_of_motion[g] = com;
    report.time_derivative[g] = td;
    report.max_constant_of_motion = std::max(report.max_constant_of_motion, com);
    report.max_time_derivative = std::max(report.max_time_derivative, td);
  }

  report.passed = report.variant_found && report.max_relation_residual < tolerance &&
                  report.max_constant_of_motion < tolerance && report.max_time_derivative < tolerance;
  return report;
}

} // namespace so42::classical
