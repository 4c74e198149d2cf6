#ifndef OUA_SPECTRAL_HPP
#define OUA_SPECTRAL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oua/algebra.hpp"
#include "oua/errors.hpp"
#include "oua/rng.hpp"

namespace oua {

/// The decomposed element had eigenvalues with a genuinely complex part;
/// the input algebra cannot be formally real.
class FormalRealityError : public NumericalError {
 public:
  explicit FormalRealityError(const std::string& what)
      : NumericalError(what) {}
};

/// Resolution of identity inside the subalgebra generated by one element:
/// a = sum_k eigenvalues[k] * idempotents[k], idempotents orthogonal,
/// summing to the unit.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // distinct, ascending
  std::vector<Element> idempotents;
};

namespace detail {

// Roots closer than this (relative to the spectral scale) are merged before
// Lagrange interpolation; the weights blow up for near-coincident roots.
inline constexpr double kRootMergeTol = 1e-7;

inline std::vector<double> companion_real_roots(
    const std::vector<double>& monic, double merge_scale) {
  const int m = static_cast<int>(monic.size()) - 1;
  if (m == 0) return {};
  if (m == 1) return {-monic[0]};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -monic[i];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp);
  Eigen::VectorXcd roots = solver.eigenvalues();
  double max_abs = std::max(1.0, roots.cwiseAbs().maxCoeff());
  double max_imag = roots.imag().cwiseAbs().maxCoeff();
  if (max_imag > kRootMergeTol * max_abs)
    throw FormalRealityError(
        "minimal polynomial has complex roots (max imaginary part " +
        std::to_string(max_imag) + "); the element has no real spectrum");
  std::vector<double> vals(roots.size());
  for (int i = 0; i < roots.size(); ++i) vals[i] = roots(i).real();
  std::sort(vals.begin(), vals.end());
  // Merge clusters.
  std::vector<double> merged;
  double tol = kRootMergeTol * std::max(1.0, merge_scale);
  std::size_t i = 0;
  while (i < vals.size()) {
    std::size_t j = i + 1;
    double sum = vals[i];
    while (j < vals.size() && vals[j] - vals[j - 1] <= tol) sum += vals[j++];
    merged.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  return merged;
}

}  // namespace detail

/// Monic minimal polynomial of `a` inside the (commutative,
/// power-associative) subalgebra it generates. Returned as coefficients
/// p[0..m] of 1, t, ..., t^m with p[m] = 1.
inline std::vector<double> minimal_polynomial(const Element& a) {
  const AlgebraSpec& spec = *a.algebra;
  if (!spec.commutative())
    throw UnsupportedConstruction(
        "minimal polynomial requires a commutative power-associative "
        "algebra");
  const int d = spec.dim();

  double scale = a.norm();
  if (scale <= 0.0) return {0.0, 1.0};  // p(t) = t
  Eigen::VectorXd scaled = a.coords / scale;

  // Gram coordinates: w = L^T x turns the trace form into the dot product.
  Eigen::MatrixXd chol_lt =
      Eigen::LLT<Eigen::MatrixXd>(spec.trace_form()).matrixL().transpose();

  Eigen::MatrixXd powers(d, d + 1);
  powers.col(0) = chol_lt * spec.unit();
  Eigen::VectorXd current = spec.unit();
  for (int m = 1; m <= d; ++m) {
    current = spec.multiply_coords(scaled, current);
    powers.col(m) = chol_lt * current;
    // m + 1 > d columns cannot be independent; the singular-value test only
    // sees min(d, m + 1) values and would miss that case.
    bool dependent = m >= d;
    if (!dependent) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(powers.leftCols(m + 1));
      const auto& sv = svd.singularValues();
      dependent = sv(sv.size() - 1) <= 1e-10 * sv(0);
    }
    if (dependent) {
      Eigen::VectorXd c = powers.leftCols(m).colPivHouseholderQr().solve(
          -powers.col(m));
      std::vector<double> monic(m + 1);
      double unscale = 1.0;
      for (int k = m - 1; k >= 0; --k) {
        unscale *= scale;  // scale^(m-k)
        monic[k] = c(k) * unscale;
      }
      monic[m] = 1.0;
      return monic;
    }
  }
  throw NumericalError(
      "no linear dependence among powers up to the algebra dimension");
}

/// Spectral decomposition via Lagrange interpolation at the minimal
/// polynomial roots.
inline SpectralDecomposition spectral_decompose(const Element& a) {
  const AlgebraSpec& spec = *a.algebra;
  std::vector<double> monic = minimal_polynomial(a);
  double scale = std::max(a.norm(), 1.0);
  std::vector<double> roots = detail::companion_real_roots(monic, scale);

  SpectralDecomposition out;
  if (roots.empty()) {  // zero polynomial degree cannot happen; a = 0 gives root 0
    roots = {0.0};
  }
  out.eigenvalues = roots;
  const int m = static_cast<int>(roots.size());
  for (int k = 0; k < m; ++k) {
    Element f = Element::unit(spec);
    for (int j = 0; j < m; ++j) {
      if (j == k) continue;
      Element shifted = a - roots[j] * Element::unit(spec);
      f = multiply(f, shifted) * (1.0 / (roots[k] - roots[j]));
    }
    out.idempotents.push_back(f);
  }
  return out;
}

/// Distinct spectrum of `a` (ascending).
inline std::vector<double> spectrum(const Element& a) {
  std::vector<double> monic = minimal_polynomial(a);
  return detail::companion_real_roots(monic, std::max(a.norm(), 1.0));
}

/// Min eigenvalue >= -tol (relative to the spectral radius).
inline bool is_positive(const Element& a, double tol = 1e-9) {
  std::vector<double> eig = spectrum(a);
  double radius = 1.0;
  for (double v : eig) radius = std::max(radius, std::abs(v));
  return eig.front() >= -tol * radius;
}

/// Order-unit norm: largest absolute eigenvalue.
inline double order_unit_norm(const Element& a) {
  std::vector<double> eig = spectrum(a);
  double r = 0.0;
  for (double v : eig) r = std::max(r, std::abs(v));
  return r;
}

/// Coordinates i.i.d. standard normal, optionally normalized to trace-form
/// norm 1.
inline Element random_element(const AlgebraSpec& spec, Rng& rng,
                              bool normalize = true) {
  Eigen::VectorXd c(spec.dim());
  for (int i = 0; i < spec.dim(); ++i) c(i) = rng.normal();
  Element a(spec, std::move(c));
  if (normalize) {
    double n = a.norm();
    if (n > 0) a.coords /= n;
  }
  return a;
}

/// A random square b box b, normalized to unit trace-form norm.
inline Element random_positive(const AlgebraSpec& spec, Rng& rng) {
  Element b = random_element(spec, rng);
  Element sq = multiply(b, b);
  double n = sq.norm();
  if (n > 0) sq.coords /= n;
  return sq;
}

/// Number of idempotents in a generic spectral decomposition. Catalog
/// algebras know it at construction; custom ones are probed.
inline int spectral_rank(const AlgebraSpec& spec) {
  if (spec.known_rank() > 0) return spec.known_rank();
  Rng rng(0xA1DEAu);
  int best = 1;
  for (int trial = 0; trial < 3; ++trial) {
    Element a = random_element(spec, rng);
    best = std::max(best,
                    static_cast<int>(spectral_decompose(a).eigenvalues.size()));
  }
  return best;
}

/// Resolution of identity from a random element with the full generic number
/// of distinct eigenvalues. Deterministic under a fixed rng state.
inline std::vector<Element> random_spectral_frame(const AlgebraSpec& spec,
                                                  Rng& rng,
                                                  int max_retries = 32) {
  const int rank = spectral_rank(spec);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Element a = random_element(spec, rng);
    SpectralDecomposition dec = spectral_decompose(a);
    if (static_cast<int>(dec.eigenvalues.size()) != rank) continue;
    // Nearly coincident eigenvalues make the Lagrange idempotents badly
    // conditioned; resample those draws.
    double spread = dec.eigenvalues.back() - dec.eigenvalues.front();
    double min_gap = spread;
    for (std::size_t k = 1; k < dec.eigenvalues.size(); ++k)
      min_gap = std::min(min_gap, dec.eigenvalues[k] - dec.eigenvalues[k - 1]);
    if (rank > 1 && min_gap < 0.05 * spread) continue;
    return std::move(dec.idempotents);
  }
  throw NumericalError(
      "failed to draw an element with generic spectrum within retry budget");
}

/// Sum of `rank` spectral idempotents of a random element; `rank` between 1
/// and the spectral rank of the algebra (the full sum gives the unit).
inline Element random_idempotent(const AlgebraSpec& spec, int rank, Rng& rng) {
  const int full = spectral_rank(spec);
  if (rank < 1 || rank > full)
    throw UsageError("idempotent rank out of range");
  std::vector<Element> frame = random_spectral_frame(spec, rng);
  // Fisher-Yates prefix of a random permutation selects the subset.
  std::vector<int> idx(frame.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::size_t j = i + rng.index(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  Element e = Element::zero(spec);
  for (int t = 0; t < rank; ++t) e = e + frame[idx[t]];
  return e;
}

inline Element random_idempotent(const AlgebraSpec& spec, int rank,
                                 std::uint64_t seed) {
  Rng rng(seed);
  return random_idempotent(spec, rank, rng);
}

}  // namespace oua

#endif  // OUA_SPECTRAL_HPP
