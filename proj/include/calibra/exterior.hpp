#pragma once

// Constant-coefficient exterior algebra over R^m: multi-index bases,
// wedge, interior product, metric inner products, Hodge star and
// pullback along linear maps. All coefficient vectors are dense and
// ordered lexicographically by multi-index.

#include <Eigen/Dense>

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <vector>

namespace calibra {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Strictly increasing 1-based index tuple (i_1 < ... < i_k), entries in [1, m].
using MultiIndex = std::vector<int>;

std::int64_t binomial(int m, int k);

/// All C(m,k) strictly increasing k-tuples in [1,m], lexicographic order.
/// Throws std::domain_error for k < 0 or k > m.
std::vector<MultiIndex> multiIndexBasis(int m, int k);

/// Lexicographic rank of I within multiIndexBasis(m, I.size()).
std::int64_t multiIndexRank(const MultiIndex& I, int m);

/// Complement of I in {1,...,m}, increasing.
MultiIndex multiIndexComplement(const MultiIndex& I, int m);

/// Sign of the permutation sorting the concatenation (I, J), or 0 if
/// I and J share an entry.
int mergeSign(const MultiIndex& I, const MultiIndex& J, MultiIndex* merged = nullptr);

/// Constant-coefficient alternating k-form on R^m.
struct KForm {
  int m = 0;
  int k = 0;
  Vector coeffs;  // length C(m,k), lexicographic multi-index order

  KForm() = default;
  KForm(int m_, int k_);
  KForm(int m_, int k_, Vector c);

  static KForm basis(int m, const MultiIndex& I, double value = 1.0);

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(double s);
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(double s, KForm a) { return a *= s; }
};

/// SPD metric on R^m with a choice of orientation.
struct MetricData {
  Matrix G;
  int orientation = +1;

  MetricData() = default;
  explicit MetricData(Matrix G_, int orientation_ = +1);
  static MetricData identity(int m);

  int dim() const { return static_cast<int>(G.rows()); }
};

/// Matrix of all k x k minors: entry (I, J) = det(A[I, J]) with row set I,
/// column set J, both lexicographic. Size C(rows,k) x C(cols,k).
Matrix compoundMatrix(const Matrix& A, int k);

/// Exterior product. Degrees must satisfy k + l <= m.
KForm wedge(const KForm& a, const KForm& b);

/// Interior product iota_u(alpha); requires deg(alpha) >= 1.
KForm interior(const Vector& u, const KForm& alpha);

/// Inner product on Lambda^k induced by G^{-1} (Gram matrix = k-th
/// compound of G^{-1}).
double inner(const KForm& a, const KForm& b, const MetricData& metric);

/// Euclidean (identity-metric) inner product of same-degree forms.
double innerEuclid(const KForm& a, const KForm& b);

/// Hodge star: beta ^ star(alpha) = inner(beta, alpha) * vol_g with
/// vol_g = orientation * sqrt(det G) * e^{1...m}.
KForm hodgeStar(const KForm& alpha, const MetricData& metric);

/// Pullback of a k-form on R^n along A : R^m -> R^n (A is n x m):
/// (A^* beta)_I = sum_J beta_J det(A[J, I]).
KForm pullback(const Matrix& A, const KForm& beta);

/// Evaluate alpha on k column vectors of V (V is m x k).
double evaluateOnVectors(const KForm& alpha, const Matrix& V);

nlohmann::json toJson(const KForm& f);
KForm kformFromJson(const nlohmann::json& j);

}  // namespace calibra
