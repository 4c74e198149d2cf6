#ifndef OUA_DERIVATIONS_HPP
#define OUA_DERIVATIONS_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "oua/algebra.hpp"
#include "oua/errors.hpp"
#include "oua/lie_classify.hpp"
#include "oua/rng.hpp"
#include "oua/spectral.hpp"

namespace oua {

/// Residuals of the Leibniz rule D(a box b) = D(a) box b + a box D(b) over
/// all basis pairs, plus the norm of D(I).
struct JordanDerivationCheck {
  double leibniz_residual = 0.0;
  double unit_residual = 0.0;
  bool ok(double tol = 1e-9) const {
    return leibniz_residual <= tol && unit_residual <= tol;
  }
};

inline JordanDerivationCheck check_jordan_derivation(const LinearOperator& D) {
  const AlgebraSpec& spec = *D.algebra;
  const int d = spec.dim();
  JordanDerivationCheck out;
  for (int i = 0; i < d; ++i) {
    const Eigen::VectorXd di = D.matrix.col(i);
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd r = D.matrix * spec.lmul_slice(i).col(j) -
                          spec.rmul_slice(j) * di -
                          spec.lmul_slice(i) * D.matrix.col(j);
      out.leibniz_residual = std::max(out.leibniz_residual, spec.norm(r));
    }
  }
  out.unit_residual = spec.norm(D.matrix * spec.unit());
  return out;
}

inline bool is_jordan_derivation(const LinearOperator& D, double tol = 1e-9) {
  return check_jordan_derivation(D).ok(tol);
}

/// D = R_{D(I)} + skew with the skew part annihilating the unit.
struct OrderDerivationSplit {
  LinearOperator op;
  Element selfadjoint_part;
  LinearOperator skew_part;
};

inline OrderDerivationSplit split_order_derivation(const LinearOperator& D) {
  const AlgebraSpec& spec = *D.algebra;
  Element a(spec, D.matrix * spec.unit());
  LinearOperator skew(spec, D.matrix - spec.right_mult_matrix(a.coords));
  return {D, std::move(a), std::move(skew)};
}

/// Decision plus corroborating evidence for the order-derivation property.
/// The decision itself is the finite-dimensional equivalence: D is an order
/// derivation iff D - R_{D(I)} satisfies the Leibniz rule. The sampled
/// residuals corroborate it through the two defining characterizations
/// (state-boundary behavior and positivity of the exponentials).
struct OrderDerivationCertificate {
  bool accepted = false;
  double leibniz_residual = 0.0;
  double unit_residual = 0.0;
  bool sampled = false;
  double boundary_residual = 0.0;   // max |<f, D g>| over orthogonal
                                    // primitive idempotent pairs
  double exp_cone_violation = 0.0;  // most negative eigenvalue seen under
                                    // exp(tD) applied to positive samples
  bool has_witness = false;
  double witness_t = 0.0;
  Element witness;
};

inline OrderDerivationCertificate is_order_derivation(
    const LinearOperator& D, std::uint64_t seed = 0, double tol = 1e-9) {
  const AlgebraSpec& spec = *D.algebra;
  OrderDerivationCertificate cert;
  OrderDerivationSplit split = split_order_derivation(D);
  JordanDerivationCheck chk = check_jordan_derivation(split.skew_part);
  cert.leibniz_residual = chk.leibniz_residual;
  cert.unit_residual = chk.unit_residual;
  cert.accepted = chk.ok(tol);

  if (!spec.commutative()) return cert;  // no spectral corroboration
  cert.sampled = true;
  Rng rng = Rng::substream(seed, 0x0D0ECAFEull);
  const double exp_times[4] = {1.0, -1.0, 4.0, -4.0};
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Element> frame = random_spectral_frame(spec, rng);
    for (std::size_t i = 0; i < frame.size(); ++i)
      for (std::size_t j = 0; j < frame.size(); ++j) {
        if (i == j) continue;
        double v = std::abs(inner(frame[i], D.apply(frame[j])));
        cert.boundary_residual = std::max(cert.boundary_residual, v);
      }

    Element a = random_positive(spec, rng);
    for (double t : exp_times) {
      Eigen::MatrixXd w = (t * D.matrix).exp();
      Element image(spec, w * a.coords);
      std::vector<double> eigs;
      try {
        eigs = spectrum(image);
      } catch (const NumericalError&) {
        eigs = {-1.0};  // spectrum left the real line entirely
      }
      double neg = -*std::min_element(eigs.begin(), eigs.end());
      if (neg > cert.exp_cone_violation) {
        cert.exp_cone_violation = neg;
        if (neg > 1e-7) {
          cert.has_witness = true;
          cert.witness_t = t;
          cert.witness = a;
        }
      }
    }
  }
  return cert;
}

/// The Lie algebra L of skew order derivations: an orthonormal operator
/// basis (Frobenius inner product), bracket structure constants, Killing
/// matrix, rank and classification label.
struct LieAlgebraStructure {
  const AlgebraSpec* algebra = nullptr;
  std::vector<LinearOperator> basis;
  int dim = 0;
  /// ad[p](s, r) is the coefficient of basis[s] in [basis[p], basis[r]].
  std::vector<Eigen::MatrixXd> ad;
  Eigen::MatrixXd killing;
  int rank = 0;
  std::string classification;
  double closure_residual = 0.0;

  double structure_constant(int p, int q, int r) const {
    return ad[static_cast<std::size_t>(p)](r, q);
  }
};

/// Solves the homogeneous Leibniz system over d x d matrices,
///   D(e_i box e_j) - D(e_i) box e_j - e_i box D(e_j) = 0 for all pairs,
///   D(I) = 0,
/// by a singular value decomposition of the stacked coefficient matrix.
/// Unknowns are vec(D) with columns stacked.
inline LieAlgebraStructure skew_derivation_basis(const AlgebraSpec& spec,
                                                 double rel_tol = 1e-9) {
  const int d = spec.dim();
  const Eigen::Index rows =
      static_cast<Eigen::Index>(d) * d * d + d;
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(rows, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Eigen::Index off = (static_cast<Eigen::Index>(i) * d + j) * d;
      const Eigen::VectorXd cij = spec.lmul_slice(i).col(j);
      for (int m = 0; m < d; ++m)
        if (cij(m) != 0.0)
          for (int t = 0; t < d; ++t) system(off + t, m * d + t) += cij(m);
      system.block(off, i * d, d, d) -= spec.rmul_slice(j);
      system.block(off, j * d, d, d) -= spec.lmul_slice(i);
    }
  const Eigen::Index uoff = static_cast<Eigen::Index>(d) * d * d;
  for (int m = 0; m < d; ++m)
    if (spec.unit()(m) != 0.0)
      for (int t = 0; t < d; ++t) system(uoff + t, m * d + t) += spec.unit()(m);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int nullity = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) <= rel_tol * sv(0)) ++nullity;

  LieAlgebraStructure lie;
  lie.algebra = &spec;
  lie.dim = nullity;
  for (int p = 0; p < nullity; ++p) {
    Eigen::VectorXd v = svd.matrixV().col(d * d - nullity + p);
    lie.basis.emplace_back(
        spec, Eigen::Map<const Eigen::MatrixXd>(v.data(), d, d));
  }

  const int m = nullity;
  lie.ad.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(m, m));
  for (int p = 0; p < m; ++p)
    for (int q = p + 1; q < m; ++q) {
      Eigen::MatrixXd bracket = lie.basis[p].matrix * lie.basis[q].matrix -
                                lie.basis[q].matrix * lie.basis[p].matrix;
      Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(d, d);
      for (int r = 0; r < m; ++r) {
        double coeff = (bracket.cwiseProduct(lie.basis[r].matrix)).sum();
        lie.ad[static_cast<std::size_t>(p)](r, q) = coeff;
        lie.ad[static_cast<std::size_t>(q)](r, p) = -coeff;
        recon.noalias() += coeff * lie.basis[r].matrix;
      }
      lie.closure_residual = std::max(lie.closure_residual,
                                      (bracket - recon).norm());
    }
  if (lie.closure_residual > 1e-6)
    throw NumericalError(
        "skew derivation space is not closed under brackets (residual " +
        std::to_string(lie.closure_residual) + ")");

  lie.killing = Eigen::MatrixXd::Zero(m, m);
  for (int p = 0; p < m; ++p)
    for (int q = p; q < m; ++q) {
      double k = (lie.ad[static_cast<std::size_t>(p)] *
                  lie.ad[static_cast<std::size_t>(q)])
                     .trace();
      lie.killing(p, q) = k;
      lie.killing(q, p) = k;
    }

  // Rank: dimension of the centralizer of a generic element, minimized over
  // a few draws to guard against unlucky samples.
  if (m > 0) {
    int best = m;
    for (std::uint64_t draw = 0; draw < 5; ++draw) {
      Rng rng = Rng::substream(0xC3A55EEDull, draw);
      Eigen::MatrixXd ad_x = Eigen::MatrixXd::Zero(m, m);
      for (int p = 0; p < m; ++p)
        ad_x.noalias() += rng.normal() * lie.ad[static_cast<std::size_t>(p)];
      Eigen::JacobiSVD<Eigen::MatrixXd> csvd(ad_x);
      const auto& cs = csvd.singularValues();
      int nul = 0;
      if (cs(0) <= 0.0) {
        nul = m;
      } else {
        for (int k = 0; k < cs.size(); ++k)
          if (cs(k) <= 1e-7 * cs(0)) ++nul;
      }
      best = std::min(best, nul);
    }
    lie.rank = best;
  }

  lie.classification =
      classify_compact_lie_algebra(lie.ad, lie.killing, lie.rank).label;
  return lie;
}

/// Recomputes the classification label from the stored invariants.
inline std::string classify_lie_algebra(const LieAlgebraStructure& lie) {
  return classify_compact_lie_algebra(lie.ad, lie.killing, lie.rank).label;
}

/// Random element of L, Frobenius-normalized; zero operator when L = {0}.
inline LinearOperator random_skew_combination(const LieAlgebraStructure& lie,
                                              Rng& rng) {
  const AlgebraSpec& spec = *lie.algebra;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(spec.dim(), spec.dim());
  for (const LinearOperator& b : lie.basis) m.noalias() += rng.normal() * b.matrix;
  double n = m.norm();
  if (n > 0) m /= n;
  return LinearOperator(spec, std::move(m));
}

}  // namespace oua

#endif  // OUA_DERIVATIONS_HPP
