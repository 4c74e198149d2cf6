#ifndef OUA_LIE_CLASSIFY_HPP
#define OUA_LIE_CLASSIFY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "oua/rng.hpp"

namespace oua {

/// Outcome of matching a Lie algebra against the compact simple catalog.
struct LieClassification {
  std::string label;
  bool killing_negative_definite = false;
  int dim = 0;
  int rank = 0;
  int n_roots = 0;
  int n_long = 0;   // for a single root length, all roots count as long
  int n_short = 0;
  double squared_length_ratio = 1.0;
};

/// Eigenvalues all below -tol after normalizing by the largest magnitude.
inline bool killing_negative_definite(const Eigen::MatrixXd& killing,
                                      double tol = 1e-8) {
  if (killing.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(killing);
  double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  if (scale < 1e-14) return false;  // zero form (abelian directions)
  return es.eigenvalues().maxCoeff() < -tol * scale;
}

namespace detail {

struct RootSystemData {
  bool ok = false;
  std::vector<Eigen::VectorXd> roots;      // coordinates against the Cartan basis
  std::vector<double> squared_lengths;     // via the inverse Killing form
};

/// Roots of a compact semisimple Lie algebra given by its ad representation:
/// pick a generic Cartan subalgebra (kernel of a generic ad_X), then read the
/// joint eigenvalues off the complex eigenvectors of a generic ad_H.
inline RootSystemData extract_root_system(
    const std::vector<Eigen::MatrixXd>& ad, const Eigen::MatrixXd& killing,
    int rank) {
  RootSystemData out;
  const int m = static_cast<int>(ad.size());
  if (rank <= 0 || rank >= m) return out;
  Rng rng(0xC1A551F1ull);

  auto ad_of = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int p = 0; p < m; ++p)
      if (x(p) != 0.0) a.noalias() += x(p) * ad[p];
    return a;
  };

  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::VectorXd x(m);
    for (int p = 0; p < m; ++p) x(p) = rng.normal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ad_of(x), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int nullity = 0;
    for (int k = 0; k < m; ++k)
      if (sv(k) <= 1e-7 * sv(0)) ++nullity;
    if (nullity != rank) continue;  // non-generic draw
    Eigen::MatrixXd cartan = svd.matrixV().rightCols(rank);

    // Killing form restricted to the Cartan subalgebra; roots live in its
    // dual, so lengths use the inverse of -K_h.
    Eigen::MatrixXd kh = cartan.transpose() * killing * cartan;
    Eigen::LLT<Eigen::MatrixXd> llt(Eigen::MatrixXd(-kh));
    if (llt.info() != Eigen::Success) continue;

    std::vector<Eigen::MatrixXd> ad_h(static_cast<std::size_t>(rank));
    for (int j = 0; j < rank; ++j) ad_h[static_cast<std::size_t>(j)] = ad_of(cartan.col(j));

    for (int draw = 0; draw < 8; ++draw) {
      Eigen::VectorXd c(rank);
      for (int j = 0; j < rank; ++j) c(j) = rng.normal();
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
      for (int j = 0; j < rank; ++j) a.noalias() += c(j) * ad_h[static_cast<std::size_t>(j)];

      Eigen::EigenSolver<Eigen::MatrixXd> es(a);
      if (es.info() != Eigen::Success) continue;
      const Eigen::VectorXcd& lam = es.eigenvalues();
      double scale = lam.cwiseAbs().maxCoeff();
      if (scale < 1e-12) continue;

      std::vector<int> nonzero;
      bool clean = true;
      for (int k = 0; k < m; ++k) {
        if (std::abs(lam(k)) <= 1e-7 * scale) continue;
        if (std::abs(lam(k).real()) > 1e-6 * scale) clean = false;
        nonzero.push_back(k);
      }
      if (!clean || static_cast<int>(nonzero.size()) != m - rank) continue;
      // Roots must be simple for the eigenvectors to be usable.
      for (std::size_t s = 0; s < nonzero.size() && clean; ++s)
        for (std::size_t t = s + 1; t < nonzero.size(); ++t)
          if (std::abs(lam(nonzero[s]) - lam(nonzero[t])) <= 1e-6 * scale) {
            clean = false;
            break;
          }
      if (!clean) continue;

      out.roots.clear();
      out.squared_lengths.clear();
      for (int k : nonzero) {
        Eigen::VectorXcd v = es.eigenvectors().col(k);
        Eigen::VectorXd vr = v.real(), vi = v.imag();
        double vv = vr.squaredNorm() + vi.squaredNorm();
        Eigen::VectorXd theta(rank);
        for (int j = 0; j < rank; ++j) {
          // Im(v^dagger ad_h v) with real arithmetic.
          const Eigen::MatrixXd& ah = ad_h[static_cast<std::size_t>(j)];
          theta(j) = (vr.dot(ah * vi) - vi.dot(ah * vr)) / vv;
        }
        out.roots.push_back(theta);
        Eigen::VectorXd dual = llt.solve(theta);
        out.squared_lengths.push_back(theta.dot(dual));
      }
      out.ok = true;
      return out;
    }
  }
  return out;
}

struct CatalogRow {
  int dim;
  int rank;
  int n_long;
  int n_short;
  int ratio_class;  // 1, 2 or 3 (squared length ratio)
  std::string label;
};

inline const std::vector<CatalogRow>& compact_simple_catalog() {
  static const std::vector<CatalogRow> rows = [] {
    std::vector<CatalogRow> t;
    for (int n = 1; n <= 8; ++n) {
      std::string label = "su(" + std::to_string(n + 1) + ")";
      if (n == 1) label = "su(2) ≅ so(3)";
      if (n == 3) label = "su(4) ≅ so(6)";
      t.push_back({n * (n + 2), n, n * (n + 1), 0, 1, label});
    }
    for (int n = 2; n <= 8; ++n) {
      std::string label = "so(" + std::to_string(2 * n + 1) + ")";
      if (n == 2) label = "so(5) ≅ sp(2)";
      t.push_back({n * (2 * n + 1), n, 2 * n * (n - 1), 2 * n, 2, label});
    }
    for (int n = 3; n <= 8; ++n)
      t.push_back({n * (2 * n + 1), n, 2 * n, 2 * n * (n - 1), 2,
                   "sp(" + std::to_string(n) + ")"});
    for (int n = 4; n <= 8; ++n)
      t.push_back({n * (2 * n - 1), n, 2 * n * (n - 1), 0, 1,
                   "so(" + std::to_string(2 * n) + ")"});
    t.push_back({14, 2, 6, 6, 3, "g2"});
    t.push_back({52, 4, 24, 24, 2, "f4"});
    t.push_back({78, 6, 72, 0, 1, "e6"});
    t.push_back({133, 7, 126, 0, 1, "e7"});
    t.push_back({248, 8, 240, 0, 1, "e8"});
    // The one reducible case arising from the catalog of ambient algebras.
    t.push_back({6, 2, 4, 0, 1, "so(4) ≅ su(2) ⊕ su(2)"});
    return t;
  }();
  return rows;
}

}  // namespace detail

/// Labels a Lie algebra given its adjoint representation, Killing matrix and
/// rank. Compact semisimple algebras are matched against the simple catalog
/// via dimension, rank and root-length statistics; everything else is
/// reported unidentified with its raw invariants.
inline LieClassification classify_compact_lie_algebra(
    const std::vector<Eigen::MatrixXd>& ad, const Eigen::MatrixXd& killing,
    int rank) {
  LieClassification out;
  out.dim = static_cast<int>(ad.size());
  out.rank = rank;
  if (out.dim == 0) {
    out.label = "trivial";
    out.killing_negative_definite = true;
    return out;
  }
  out.killing_negative_definite = killing_negative_definite(killing);
  if (!out.killing_negative_definite) {
    out.label = "unidentified (non-compact or non-semisimple)";
    return out;
  }

  detail::RootSystemData rs = detail::extract_root_system(ad, killing, rank);
  if (!rs.ok) {
    out.label = "unidentified (root system extraction failed, dim " +
                std::to_string(out.dim) + ", rank " + std::to_string(rank) +
                ")";
    return out;
  }
  out.n_roots = static_cast<int>(rs.roots.size());

  double lmin = *std::min_element(rs.squared_lengths.begin(),
                                  rs.squared_lengths.end());
  double lmax = *std::max_element(rs.squared_lengths.begin(),
                                  rs.squared_lengths.end());
  out.squared_length_ratio = lmax / lmin;

  int ratio_class = 0;
  if (out.squared_length_ratio < 1.25)
    ratio_class = 1;
  else if (std::abs(out.squared_length_ratio - 2.0) < 0.25)
    ratio_class = 2;
  else if (std::abs(out.squared_length_ratio - 3.0) < 0.35)
    ratio_class = 3;

  if (ratio_class == 1) {
    out.n_long = out.n_roots;
    out.n_short = 0;
  } else {
    for (double l : rs.squared_lengths)
      if (l < 1.25 * lmin)
        ++out.n_short;
      else
        ++out.n_long;
  }

  for (const auto& row : detail::compact_simple_catalog()) {
    if (row.dim == out.dim && row.rank == out.rank &&
        row.n_long == out.n_long && row.n_short == out.n_short &&
        row.ratio_class == ratio_class) {
      out.label = row.label;
      return out;
    }
  }
  out.label = "unidentified (compact, dim " + std::to_string(out.dim) +
              ", rank " + std::to_string(rank) + ", roots " +
              std::to_string(out.n_roots) + ")";
  return out;
}

}  // namespace oua

#endif  // OUA_LIE_CLASSIFY_HPP
