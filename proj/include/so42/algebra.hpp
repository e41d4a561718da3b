#pragma once

// Exact arithmetic over the abstract 15-dimensional real Lie algebra so(4,2),
// written in the skew-Hermitian basis X' = -iX. In that basis a Hermitian
// relation [X, Y] = i c Z becomes [X', Y'] = c Z', so every structure
// constant is a small real integer.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "so42/generator.hpp"

namespace so42 {

using Rational = boost::rational<std::int64_t>;

/// Element of so(4,2) as a coefficient vector over the canonical basis.
template <class Scalar>
struct Element {
  std::array<Scalar, kNumGenerators> coeffs{};

  static Element basis(GeneratorId g)
  {
    Element e;
    e.coeffs[index(g)] = Scalar(1);
    return e;
  }

  Scalar& operator[](GeneratorId g) { return coeffs[index(g)]; }
  const Scalar& operator[](GeneratorId g) const { return coeffs[index(g)]; }

  bool is_zero() const
  {
    for (const auto& c : coeffs)
      if (c != Scalar(0)) return false;
    return true;
  }

  Element& operator+=(const Element& o)
  {
    for (std::size_t i = 0; i < kNumGenerators; ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  Element& operator-=(const Element& o)
  {
    for (std::size_t i = 0; i < kNumGenerators; ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  Element& operator*=(const Scalar& s)
  {
    for (auto& c : coeffs) c *= s;
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { return a *= Scalar(-1); }
  friend Element operator*(const Scalar& s, Element a) { return a *= s; }
  friend bool operator==(const Element&, const Element&) = default;
};

using AlgebraElement = Element<Rational>;
using NumericElement = Element<double>;

NumericElement to_numeric(const AlgebraElement& x);

/// One printed commutation relation between generator families, e.g.
/// [L, A] = A with an epsilon pattern. `sign == 0` records a vanishing
/// relation such as [L, S] = 0.
struct FamilyRelation {
  char lhs;
  char rhs;
  char result; // '0' when the bracket vanishes
  int sign;
};

/// The relation list the table is expanded from (real basis).
std::span<const FamilyRelation> printed_relations();

/// Fully expanded 15x15x15 table f with [X'_a, X'_b] = sum_c f_ab^c X'_c.
class StructureTable {
public:
  /// The so(4,2) table. Built once; immutable afterwards.
  static const StructureTable& so42();

  int coefficient(GeneratorId a, GeneratorId b, GeneratorId c) const
  {
    return f_[index(a)][index(b)][index(c)];
  }

  /// Bracket of two basis generators as a full element.
  AlgebraElement bracket_basis(GeneratorId a, GeneratorId b) const;

  /// Metric of the six-dimensional pseudo-Euclidean space.
  static constexpr std::array<int, 6> metric_signature() { return {1, 1, 1, 1, -1, -1}; }

  /// Number of ordered (a, b, c) entries with a nonzero coefficient.
  std::size_t nonzero_count() const;

private:
  StructureTable();
  std::array<std::array<std::array<std::int8_t, kNumGenerators>, kNumGenerators>, kNumGenerators> f_{};
};

template <class Scalar>
Element<Scalar> bracket(const Element<Scalar>& a, const Element<Scalar>& b)
{
  const auto& table = StructureTable::so42();
  Element<Scalar> out;
  for (std::size_t i = 0; i < kNumGenerators; ++i) {
    if (a.coeffs[i] == Scalar(0)) continue;
    for (std::size_t j = 0; j < kNumGenerators; ++j) {
      if (b.coeffs[j] == Scalar(0)) continue;
      const Scalar w = a.coeffs[i] * b.coeffs[j];
      for (std::size_t k = 0; k < kNumGenerators; ++k) {
        const int f = table.coefficient(generator_at(i), generator_at(j), generator_at(k));
        if (f != 0) out.coeffs[k] += Scalar(f) * w;
      }
    }
  }
  return out;
}

/// [a,[b,c]] + [b,[c,a]] + [c,[a,b]].
AlgebraElement jacobi_defect(GeneratorId a, GeneratorId b, GeneratorId c);

struct JacobiSuiteResult {
  std::size_t triples_checked = 0;
  std::size_t failures = 0;
};

/// Jacobi identity over all C(15,3) = 455 unordered triples.
JacobiSuiteResult jacobi_suite();

template <class Scalar>
struct SubalgebraResult {
  std::vector<Element<Scalar>> basis;
  int dim = 0;
  /// Bracket rounds that enlarged the span before it stabilized.
  int depth = 0;
  bool converged = true;
};

inline constexpr int kMaxClosureDepth = 10;

/// Smallest bracket-closed subspace containing the seeds, exact rank path.
SubalgebraResult<Rational> generated_subalgebra_exact(std::span<const AlgebraElement> seeds);

/// Floating-point closure. A candidate enlarges the span when the smallest
/// singular value of the stacked basis exceeds tol times the largest one.
SubalgebraResult<double> generated_subalgebra(std::span<const NumericElement> seeds, double tol = 1e-10);

/// Basis elements for a list of generators.
std::vector<AlgebraElement> basis_elements(std::span<const GeneratorId> ids);

using KillingMatrix = std::array<std::array<Rational, kNumGenerators>, kNumGenerators>;

/// B(x, y) = trace(ad x ad y) on basis pairs.
KillingMatrix killing_form();

/// Rank of the Killing form restricted to span(ids) x span(ids).
int killing_rank(std::span<const GeneratorId> ids);

/// True when the Killing form has full rank 15 (semisimplicity).
bool killing_nondegeneracy();

/// Exact rank of a list of rational vectors.
int exact_rank(const std::vector<std::vector<Rational>>& rows);

/// Exact test that x lies in span(basis).
bool in_span_exact(std::span<const AlgebraElement> basis, const AlgebraElement& x);

} // namespace so42
