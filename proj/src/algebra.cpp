#include "so42/algebra.hpp"

#include <cassert>
#include <set>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace so42 {

namespace {

// Real-basis form of the commutation table. Vector-vector relations expand
// with epsilon_ijk when the result is a vector and with delta_ij when it is
// a scalar; scalar-vector relations act componentwise.
constexpr FamilyRelation kRelations[] = {
    {'L', 'L', 'L', +1}, {'L', 'A', 'A', +1}, {'L', 'B', 'B', +1},
    {'L', 'S', '0', 0},  {'A', 'A', 'L', +1}, {'S', 'A', 'B', +1},
    {'A', 'B', 'S', +1}, {'B', 'B', 'L', -1}, {'S', 'B', 'A', +1},
    {'C', 'A', 'G', +1}, {'D', 'A', '0', 0},  {'C', 'B', '0', 0},
    {'D', 'B', 'G', -1}, {'C', 'L', '0', 0},  {'D', 'L', '0', 0},
    {'L', 'G', 'G', +1}, {'C', 'S', 'D', -1}, {'S', 'D', 'C', +1},
    {'D', 'C', 'S', +1}, {'G', 'A', 'C', -1}, {'G', 'B', 'D', -1},
    {'G', 'C', 'A', -1}, {'G', 'S', '0', 0},  {'G', 'D', 'B', -1},
    {'G', 'G', 'L', -1},
};

bool is_vector_family(char f) { return f == 'L' || f == 'A' || f == 'B' || f == 'G'; }

GeneratorId member(char family, int component)
{
  switch (family) {
  case 'L': return generator_at(0 + component - 1);
  case 'A': return generator_at(3 + component - 1);
  case 'B': return generator_at(6 + component - 1);
  case 'G': return generator_at(9 + component - 1);
  case 'S': return GeneratorId::S;
  case 'C': return GeneratorId::C;
  case 'D': return GeneratorId::D;
  }
  throw std::logic_error("unknown generator family");
}

int levi_civita(int i, int j, int k)
{
  return (i - j) * (j - k) * (k - i) / 2;
}

std::pair<char, char> unordered(char a, char b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

} // namespace

std::span<const FamilyRelation> printed_relations() { return kRelations; }

NumericElement to_numeric(const AlgebraElement& x)
{
  NumericElement out;
  for (std::size_t i = 0; i < kNumGenerators; ++i)
    out.coeffs[i] = boost::rational_cast<double>(x.coeffs[i]);
  return out;
}

StructureTable::StructureTable()
{
  auto set = [this](GeneratorId a, GeneratorId b, GeneratorId c, int v) {
    f_[index(a)][index(b)][index(c)] = static_cast<std::int8_t>(v);
    f_[index(b)][index(a)][index(c)] = static_cast<std::int8_t>(-v);
  };

  std::set<std::pair<char, char>> covered;
  for (const auto& rel : kRelations) {
    if (!covered.insert(unordered(rel.lhs, rel.rhs)).second)
      throw std::logic_error("duplicate family relation");
    if (rel.sign == 0) continue;

    const bool lv = is_vector_family(rel.lhs);
    const bool rv = is_vector_family(rel.rhs);
    if (lv && rv && is_vector_family(rel.result)) {
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
          for (int k = 1; k <= 3; ++k)
            if (int e = levi_civita(i, j, k); e != 0)
              set(member(rel.lhs, i), member(rel.rhs, j), member(rel.result, k), rel.sign * e);
    } else if (lv && rv) {
      for (int i = 1; i <= 3; ++i)
        set(member(rel.lhs, i), member(rel.rhs, i), member(rel.result, 0), rel.sign);
    } else if (lv || rv) {
      for (int i = 1; i <= 3; ++i)
        set(member(rel.lhs, lv ? i : 0), member(rel.rhs, rv ? i : 0), member(rel.result, i), rel.sign);
    } else {
      set(member(rel.lhs, 0), member(rel.rhs, 0), member(rel.result, 0), rel.sign);
    }
  }
  // 7 families give 28 unordered pairs; the three scalar self-pairs vanish trivially.
  if (covered.size() != 25) throw std::logic_error("family relation table is incomplete");
}

const StructureTable& StructureTable::so42()
{
  static const StructureTable table;
  return table;
}

AlgebraElement StructureTable::bracket_basis(GeneratorId a, GeneratorId b) const
{
  AlgebraElement out;
  for (std::size_t c = 0; c < kNumGenerators; ++c)
    out.coeffs[c] = f_[index(a)][index(b)][c];
  return out;
}

std::size_t StructureTable::nonzero_count() const
{
  std::size_t n = 0;
  for (const auto& plane : f_)
    for (const auto& row : plane)
      for (auto v : row) n += (v != 0);
  return n;
}

AlgebraElement jacobi_defect(GeneratorId a, GeneratorId b, GeneratorId c)
{
  const auto x = AlgebraElement::basis(a);
  const auto y = AlgebraElement::basis(b);
  const auto z = AlgebraElement::basis(c);
  return bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
}

JacobiSuiteResult jacobi_suite()
{
  JacobiSuiteResult r;
  for (std::size_t a = 0; a < kNumGenerators; ++a)
    for (std::size_t b = a + 1; b < kNumGenerators; ++b)
      for (std::size_t c = b + 1; c < kNumGenerators; ++c) {
        ++r.triples_checked;
        if (!jacobi_defect(generator_at(a), generator_at(b), generator_at(c)).is_zero()) ++r.failures;
      }
  return r;
}

namespace {

// Incremental row-echelon form over the rationals.
class ExactSpan {
public:
  explicit ExactSpan(std::size_t width) : width_(width) {}

  bool insert(std::vector<Rational> v)
  {
    reduce(v);
    std::size_t p = 0;
    while (p < width_ && v[p] == Rational(0)) ++p;
    if (p == width_) return false;
    const Rational lead = v[p];
    for (auto& x : v) x /= lead;
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  bool contains(std::vector<Rational> v) const
  {
    reduce(v);
    for (const auto& x : v)
      if (x != Rational(0)) return false;
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

private:
  void reduce(std::vector<Rational>& v) const
  {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational factor = v[pivots_[r]];
      if (factor == Rational(0)) continue;
      for (std::size_t k = 0; k < width_; ++k) v[k] -= factor * rows_[r][k];
    }
  }

  std::size_t width_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> pivots_;
};

std::vector<Rational> as_row(const AlgebraElement& x) { return {x.coeffs.begin(), x.coeffs.end()}; }

// Numeric span with a singular-value rank test.
class NumericSpan {
public:
  explicit NumericSpan(double tol) : tol_(tol) {}

  bool insert(const NumericElement& x)
  {
    Eigen::MatrixXd m(kNumGenerators, members_.size() + 1);
    for (std::size_t j = 0; j < members_.size(); ++j)
      for (std::size_t i = 0; i < kNumGenerators; ++i) m(i, j) = members_[j].coeffs[i];
    for (std::size_t i = 0; i < kNumGenerators; ++i) m(i, members_.size()) = x.coeffs[i];
    if (numeric_rank(m) <= members_.size()) return false;
    members_.push_back(x);
    return true;
  }

  const std::vector<NumericElement>& members() const { return members_; }

private:
  std::size_t numeric_rank(const Eigen::MatrixXd& m) const
  {
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) r += (s(i) > tol_ * s(0));
    return r;
  }

  double tol_;
  std::vector<NumericElement> members_;
};

} // namespace

SubalgebraResult<Rational> generated_subalgebra_exact(std::span<const AlgebraElement> seeds)
{
  if (seeds.empty()) throw std::invalid_argument("generated_subalgebra: seeds must be nonempty");
  ExactSpan span(kNumGenerators);
  SubalgebraResult<Rational> out;
  for (const auto& s : seeds)
    if (span.insert(as_row(s))) out.basis.push_back(s);

  out.converged = false;
  for (int round = 1; round <= kMaxClosureDepth; ++round) {
    const std::size_t before = out.basis.size();
    for (std::size_t i = 0; i < before; ++i)
      for (std::size_t j = i + 1; j < before; ++j) {
        auto z = bracket(out.basis[i], out.basis[j]);
        if (span.insert(as_row(z))) out.basis.push_back(std::move(z));
      }
    if (out.basis.size() == before) {
      out.converged = true;
      break;
    }
    out.depth = round;
  }
  out.dim = static_cast<int>(out.basis.size());
  return out;
}

SubalgebraResult<double> generated_subalgebra(std::span<const NumericElement> seeds, double tol)
{
  if (seeds.empty()) throw std::invalid_argument("generated_subalgebra: seeds must be nonempty");
  NumericSpan span(tol);
  for (const auto& s : seeds) span.insert(s);

  SubalgebraResult<double> out;
  out.converged = false;
  for (int round = 1; round <= kMaxClosureDepth; ++round) {
    const std::vector<NumericElement> current = span.members();
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j) span.insert(bracket(current[i], current[j]));
    if (span.members().size() == current.size()) {
      out.converged = true;
      break;
    }
    out.depth = round;
  }
  out.basis = span.members();
  out.dim = static_cast<int>(out.basis.size());
  return out;
}

std::vector<AlgebraElement> basis_elements(std::span<const GeneratorId> ids)
{
  std::vector<AlgebraElement> out;
  out.reserve(ids.size());
  for (auto g : ids) out.push_back(AlgebraElement::basis(g));
  return out;
}

KillingMatrix killing_form()
{
  const auto& t = StructureTable::so42();
  KillingMatrix k{};
  // (ad X_a)_{dc} = f_{ac}^d, so trace(ad_a ad_b) = sum_{c,d} f_{ac}^d f_{bd}^c.
  for (std::size_t a = 0; a < kNumGenerators; ++a)
    for (std::size_t b = 0; b < kNumGenerators; ++b) {
      std::int64_t sum = 0;
      for (std::size_t c = 0; c < kNumGenerators; ++c)
        for (std::size_t d = 0; d < kNumGenerators; ++d)
          sum += t.coefficient(generator_at(a), generator_at(c), generator_at(d)) *
                 t.coefficient(generator_at(b), generator_at(d), generator_at(c));
      k[a][b] = Rational(sum);
    }
  return k;
}

int exact_rank(const std::vector<std::vector<Rational>>& rows)
{
  if (rows.empty()) return 0;
  ExactSpan span(rows.front().size());
  for (const auto& r : rows) span.insert(r);
  return static_cast<int>(span.rank());
}

int killing_rank(std::span<const GeneratorId> ids)
{
  const auto k = killing_form();
  std::vector<std::vector<Rational>> rows;
  for (auto a : ids) {
    std::vector<Rational> row;
    for (auto b : ids) row.push_back(k[index(a)][index(b)]);
    rows.push_back(std::move(row));
  }
  return exact_rank(rows);
}

bool killing_nondegeneracy()
{
  const auto all = all_generators();
  return killing_rank(all) == static_cast<int>(kNumGenerators);
}

bool in_span_exact(std::span<const AlgebraElement> basis, const AlgebraElement& x)
{
  ExactSpan span(kNumGenerators);
  for (const auto& b : basis) span.insert(as_row(b));
  return span.contains(as_row(x));
}

} // namespace so42
