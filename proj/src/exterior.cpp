#include "calibra/exterior.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace calibra {

namespace {

double detOfMinor(const Matrix& A, const MultiIndex& rows, const MultiIndex& cols) {
  const int k = static_cast<int>(rows.size());
  switch (k) {
    case 0:
      return 1.0;
    case 1:
      return A(rows[0] - 1, cols[0] - 1);
    case 2:
      return A(rows[0] - 1, cols[0] - 1) * A(rows[1] - 1, cols[1] - 1) -
             A(rows[0] - 1, cols[1] - 1) * A(rows[1] - 1, cols[0] - 1);
    case 3: {
      const double a = A(rows[0] - 1, cols[0] - 1), b = A(rows[0] - 1, cols[1] - 1),
                   c = A(rows[0] - 1, cols[2] - 1);
      const double d = A(rows[1] - 1, cols[0] - 1), e = A(rows[1] - 1, cols[1] - 1),
                   f = A(rows[1] - 1, cols[2] - 1);
      const double g = A(rows[2] - 1, cols[0] - 1), h = A(rows[2] - 1, cols[1] - 1),
                   i = A(rows[2] - 1, cols[2] - 1);
      return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    }
    default: {
      Matrix sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = A(rows[r] - 1, cols[c] - 1);
      if (k == 4) {
        double det = 0.0;
        MultiIndex r3{rows[1], rows[2], rows[3]};
        // cofactor expansion along the first row
        for (int c = 0; c < 4; ++c) {
          MultiIndex c3;
          for (int t = 0; t < 4; ++t)
            if (t != c) c3.push_back(cols[t]);
          const double minor = detOfMinor(A, r3, c3);
          det += ((c % 2 == 0) ? 1.0 : -1.0) * A(rows[0] - 1, cols[c] - 1) * minor;
        }
        return det;
      }
      return Eigen::PartialPivLU<Matrix>(sub).determinant();
    }
  }
}

void checkMultiIndex(const MultiIndex& I, int m) {
  int prev = 0;
  for (int v : I) {
    if (v <= prev || v > m) throw std::domain_error("invalid multi-index");
    prev = v;
  }
}

}  // namespace

std::int64_t binomial(int m, int k) {
  if (k < 0 || k > m) return 0;
  k = std::min(k, m - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

std::vector<MultiIndex> multiIndexBasis(int m, int k) {
  if (k < 0 || k > m || m < 0) throw std::domain_error("multiIndexBasis: need 0 <= k <= m");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(binomial(m, k)));
  MultiIndex cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i + 1;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  while (true) {
    out.push_back(cur);
    int t = k - 1;
    while (t >= 0 && cur[t] == m - (k - 1 - t)) --t;
    if (t < 0) break;
    ++cur[t];
    for (int s = t + 1; s < k; ++s) cur[s] = cur[s - 1] + 1;
  }
  return out;
}

std::int64_t multiIndexRank(const MultiIndex& I, int m) {
  const int k = static_cast<int>(I.size());
  checkMultiIndex(I, m);
  std::int64_t rank = 0;
  int prev = 0;
  for (int t = 0; t < k; ++t) {
    for (int v = prev + 1; v < I[t]; ++v) rank += binomial(m - v, k - t - 1);
    prev = I[t];
  }
  return rank;
}

MultiIndex multiIndexComplement(const MultiIndex& I, int m) {
  MultiIndex out;
  out.reserve(static_cast<std::size_t>(m) - I.size());
  std::size_t p = 0;
  for (int v = 1; v <= m; ++v) {
    if (p < I.size() && I[p] == v) {
      ++p;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

int mergeSign(const MultiIndex& I, const MultiIndex& J, MultiIndex* merged) {
  MultiIndex cat;
  cat.reserve(I.size() + J.size());
  cat.insert(cat.end(), I.begin(), I.end());
  cat.insert(cat.end(), J.begin(), J.end());
  int inversions = 0;
  for (std::size_t a = 0; a < cat.size(); ++a)
    for (std::size_t b = a + 1; b < cat.size(); ++b) {
      if (cat[a] == cat[b]) return 0;
      if (cat[a] > cat[b]) ++inversions;
    }
  if (merged) {
    *merged = cat;
    std::sort(merged->begin(), merged->end());
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

KForm::KForm(int m_, int k_) : m(m_), k(k_) {
  if (k < 0 || k > m) throw std::domain_error("KForm: need 0 <= k <= m");
  coeffs = Vector::Zero(binomial(m, k));
}

KForm::KForm(int m_, int k_, Vector c) : KForm(m_, k_) {
  if (c.size() != coeffs.size()) throw std::domain_error("KForm: coefficient length mismatch");
  coeffs = std::move(c);
}

KForm KForm::basis(int m, const MultiIndex& I, double value) {
  KForm f(m, static_cast<int>(I.size()));
  f.coeffs[multiIndexRank(I, m)] = value;
  return f;
}

KForm& KForm::operator+=(const KForm& other) {
  if (m != other.m || k != other.k) throw std::domain_error("KForm: degree/dimension mismatch");
  coeffs += other.coeffs;
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  if (m != other.m || k != other.k) throw std::domain_error("KForm: degree/dimension mismatch");
  coeffs -= other.coeffs;
  return *this;
}

KForm& KForm::operator*=(double s) {
  coeffs *= s;
  return *this;
}

MetricData::MetricData(Matrix G_, int orientation_) : G(std::move(G_)), orientation(orientation_) {
  if (G.rows() != G.cols()) throw std::domain_error("MetricData: matrix must be square");
  if (orientation != 1 && orientation != -1) throw std::domain_error("MetricData: orientation must be +-1");
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::domain_error("MetricData: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) throw std::domain_error("MetricData: matrix not positive definite");
}

MetricData MetricData::identity(int m) {
  MetricData md;
  md.G = Matrix::Identity(m, m);
  return md;
}

Matrix compoundMatrix(const Matrix& A, int k) {
  const int nr = static_cast<int>(A.rows());
  const int nc = static_cast<int>(A.cols());
  if (k < 0 || k > nr || k > nc) throw std::domain_error("compoundMatrix: degree out of range");
  const auto rows = multiIndexBasis(nr, k);
  const auto cols = multiIndexBasis(nc, k);
  Matrix C(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) C(r, c) = detOfMinor(A, rows[r], cols[c]);
  return C;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.m != b.m) throw std::domain_error("wedge: ambient dimension mismatch");
  if (a.k + b.k > a.m) throw std::domain_error("wedge: degree exceeds ambient dimension");
  KForm out(a.m, a.k + b.k);
  const auto basisA = multiIndexBasis(a.m, a.k);
  const auto basisB = multiIndexBasis(b.m, b.k);
  MultiIndex merged;
  for (std::size_t ia = 0; ia < basisA.size(); ++ia) {
    if (a.coeffs[ia] == 0.0) continue;
    for (std::size_t ib = 0; ib < basisB.size(); ++ib) {
      if (b.coeffs[ib] == 0.0) continue;
      const int sign = mergeSign(basisA[ia], basisB[ib], &merged);
      if (sign == 0) continue;
      out.coeffs[multiIndexRank(merged, a.m)] += sign * a.coeffs[ia] * b.coeffs[ib];
    }
  }
  return out;
}

KForm interior(const Vector& u, const KForm& alpha) {
  if (alpha.k < 1) throw std::domain_error("interior: degree must be >= 1");
  if (u.size() != alpha.m) throw std::domain_error("interior: vector dimension mismatch");
  KForm out(alpha.m, alpha.k - 1);
  const auto basis = multiIndexBasis(alpha.m, alpha.k);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (alpha.coeffs[i] == 0.0) continue;
    const MultiIndex& I = basis[i];
    for (int t = 0; t < alpha.k; ++t) {
      const double w = u[I[t] - 1];
      if (w == 0.0) continue;
      MultiIndex reduced;
      reduced.reserve(I.size() - 1);
      for (int s = 0; s < alpha.k; ++s)
        if (s != t) reduced.push_back(I[s]);
      const double sign = (t % 2 == 0) ? 1.0 : -1.0;
      out.coeffs[multiIndexRank(reduced, alpha.m)] += sign * w * alpha.coeffs[i];
    }
  }
  return out;
}

double inner(const KForm& a, const KForm& b, const MetricData& metric) {
  if (a.m != b.m || a.k != b.k) throw std::domain_error("inner: degree/dimension mismatch");
  if (metric.dim() != a.m) throw std::domain_error("inner: metric dimension mismatch");
  const Matrix Ginv = metric.G.inverse();
  const Matrix gram = compoundMatrix(Ginv, a.k);
  return a.coeffs.dot(gram * b.coeffs);
}

double innerEuclid(const KForm& a, const KForm& b) {
  if (a.m != b.m || a.k != b.k) throw std::domain_error("inner: degree/dimension mismatch");
  return a.coeffs.dot(b.coeffs);
}

KForm hodgeStar(const KForm& alpha, const MetricData& metric) {
  const int m = alpha.m;
  if (metric.dim() != m) throw std::domain_error("hodgeStar: metric dimension mismatch");
  const Matrix Ginv = metric.G.inverse();
  const Matrix gram = compoundMatrix(Ginv, alpha.k);
  const Vector paired = gram * alpha.coeffs;  // paired_J = <e_J, alpha>
  const double volScale = metric.orientation * std::sqrt(metric.G.determinant());
  KForm out(m, m - alpha.k);
  const auto basis = multiIndexBasis(m, alpha.k);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const MultiIndex comp = multiIndexComplement(basis[j], m);
    const int sign = mergeSign(basis[j], comp);
    out.coeffs[multiIndexRank(comp, m)] = sign * volScale * paired[j];
  }
  return out;
}

KForm pullback(const Matrix& A, const KForm& beta) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  if (beta.m != n) throw std::domain_error("pullback: form lives on the wrong space");
  if (beta.k > m) throw std::domain_error("pullback: degree exceeds source dimension");
  const auto srcBasis = multiIndexBasis(m, beta.k);
  const auto tgtBasis = multiIndexBasis(n, beta.k);
  KForm out(m, beta.k);
  for (std::size_t i = 0; i < srcBasis.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < tgtBasis.size(); ++j) {
      if (beta.coeffs[j] == 0.0) continue;
      acc += beta.coeffs[j] * detOfMinor(A, tgtBasis[j], srcBasis[i]);
    }
    out.coeffs[i] = acc;
  }
  return out;
}

double evaluateOnVectors(const KForm& alpha, const Matrix& V) {
  if (V.rows() != alpha.m || V.cols() != alpha.k)
    throw std::domain_error("evaluateOnVectors: expected m x k vector block");
  const auto basis = multiIndexBasis(alpha.m, alpha.k);
  double value = 0.0;
  MultiIndex cols(alpha.k);
  for (int c = 0; c < alpha.k; ++c) cols[c] = c + 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (alpha.coeffs[i] == 0.0) continue;
    value += alpha.coeffs[i] * detOfMinor(V, basis[i], cols);
  }
  return value;
}

nlohmann::json toJson(const KForm& f) {
  nlohmann::json j;
  j["m"] = f.m;
  j["k"] = f.k;
  j["coeffs"] = std::vector<double>(f.coeffs.data(), f.coeffs.data() + f.coeffs.size());
  return j;
}

KForm kformFromJson(const nlohmann::json& j) {
  const int m = j.at("m").get<int>();
  const int k = j.at("k").get<int>();
  const auto c = j.at("coeffs").get<std::vector<double>>();
  Vector v = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
  return KForm(m, k, std::move(v));
}

}  // namespace calibra
