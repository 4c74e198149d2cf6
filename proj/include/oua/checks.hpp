#ifndef OUA_CHECKS_HPP
#define OUA_CHECKS_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oua/algebra.hpp"
#include "oua/derivations.hpp"
#include "oua/logic.hpp"
#include "oua/rng.hpp"
#include "oua/spectral.hpp"

namespace oua {

/// Result of a sampled property suite. `passed` is max_violation against the
/// tolerance; the parameters are echoed for reproducibility.
struct CheckReport {
  std::string check;
  std::string algebra;
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  double max_violation = 0.0;
  bool passed = false;
};

namespace detail {

inline CheckReport finish_report(std::string name, const AlgebraSpec& spec,
                                 int samples, std::uint64_t seed, double tol,
                                 double violation) {
  CheckReport r;
  r.check = std::move(name);
  r.algebra = spec.catalog_tag().empty() ? ("custom(dim " +
                                            std::to_string(spec.dim()) + ")")
                                         : spec.catalog_tag();
  r.samples = samples;
  r.seed = seed;
  r.tolerance = tol;
  r.max_violation = violation;
  r.passed = violation <= tol;
  return r;
}

/// Random subset of {0..m-1}; each index enters with probability 1/2.
inline std::vector<int> random_subset(Rng& rng, int m) {
  std::vector<int> out;
  for (int k = 0; k < m; ++k)
    if (rng.uniform() < 0.5) out.push_back(k);
  return out;
}

inline std::vector<int> complement_of(const std::vector<int>& subset, int m) {
  std::vector<int> out;
  std::size_t at = 0;
  for (int k = 0; k < m; ++k) {
    if (at < subset.size() && subset[at] == k) {
      ++at;
      continue;
    }
    out.push_back(k);
  }
  return out;
}

inline Element sum_of(const std::vector<Element>& frame,
                      const std::vector<int>& subset) {
  Element e = Element::zero(*frame.front().algebra);
  for (int k : subset) e = e + frame[static_cast<std::size_t>(k)];
  return e;
}

inline double min_eigenvalue(const Element& a) {
  std::vector<double> eigs = spectrum(a);
  return *std::min_element(eigs.begin(), eigs.end());
}

}  // namespace detail

/// Norm submultiplicativity ||a box b|| <= ||a|| ||b|| and idempotency of
/// sampled extreme points of [0, I].
inline CheckReport check_condition_A(const AlgebraSpec& spec, int n_samples,
                                     std::uint64_t seed, double tol = 1e-9) {
  double violation = 0.0;
  const int full = spectral_rank(spec);
  for (int trial = 0; trial < n_samples; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    Element a = random_element(spec, rng);
    Element b = random_element(spec, rng);
    double lhs = order_unit_norm(multiply(a, b));
    double rhs = order_unit_norm(a) * order_unit_norm(b);
    violation = std::max(violation, lhs - rhs);

    Element e = random_idempotent(spec, 1 + rng.index(full), rng);
    violation = std::max(violation, (multiply(e, e) - e).norm());
  }
  return detail::finish_report("condA", spec, n_samples, seed, tol, violation);
}

/// Positivity of every U_e plus its range behavior: U_e fixes events under e
/// and annihilates events orthogonal to e.
inline CheckReport check_condition_B(const AlgebraSpec& spec, int n_samples,
                                     std::uint64_t seed, double tol = 1e-9) {
  double violation = 0.0;
  for (int trial = 0; trial < n_samples; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    std::vector<Element> frame = random_spectral_frame(spec, rng);
    const int m = static_cast<int>(frame.size());
    std::vector<int> subset = detail::random_subset(rng, m);
    Element e = detail::sum_of(frame, subset);
    Eigen::MatrixXd ue = quadratic_map(Event::trusted(e)).matrix;

    Element a = random_positive(spec, rng);
    Element image(spec, ue * a.coords);
    violation = std::max(violation, -detail::min_eigenvalue(image));

    std::vector<int> sub;
    for (int k : subset)
      if (rng.uniform() < 0.5) sub.push_back(k);
    Element f = detail::sum_of(frame, sub);
    violation =
        std::max(violation, (Element(spec, ue * f.coords) - f).norm());

    std::vector<int> ortho;
    for (int k : detail::complement_of(subset, m))
      if (rng.uniform() < 0.5) ortho.push_back(k);
    Element g = detail::sum_of(frame, ortho);
    violation = std::max(violation, spec.norm(ue * g.coords));
  }
  return detail::finish_report("condB", spec, n_samples, seed, tol, violation);
}

/// States vanishing on a positive element also vanish on its products:
/// mu(a) = 0 with a >= 0 forces mu(a box b) = 0.
inline CheckReport check_condition_D(const AlgebraSpec& spec, int n_samples,
                                     std::uint64_t seed, double tol = 1e-9) {
  double violation = 0.0;
  for (int trial = 0; trial < n_samples; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    std::vector<Element> frame = random_spectral_frame(spec, rng);
    const int m = static_cast<int>(frame.size());
    // Nonempty proper subset carrying a; the state lives on the complement.
    std::vector<int> subset;
    while (subset.empty() || static_cast<int>(subset.size()) == m)
      subset = detail::random_subset(rng, m);

    Element a = Element::zero(spec);
    for (int k : subset)
      a = a + (0.25 + 1.75 * rng.uniform()) * frame[static_cast<std::size_t>(k)];

    Element rho = Element::zero(spec);
    for (int k : detail::complement_of(subset, m))
      rho = rho + (0.1 + rng.uniform()) * frame[static_cast<std::size_t>(k)];
    rho.coords /= inner(rho, Element::unit(spec));
    State mu{rho};

    violation = std::max(violation, std::abs(mu(a)));
    for (int draws = 0; draws < 3; ++draws) {
      Element b = random_element(spec, rng);
      violation = std::max(violation, std::abs(mu(multiply(a, b))));
    }
  }
  return detail::finish_report("condD", spec, n_samples, seed, tol, violation);
}

/// The compression identities of the quadratic maps: idempotency of U_e,
/// mutual annihilation with U_{e'}, fixed points below e, the T_e
/// reconstruction, and the behavior on orthogonal events.
inline CheckReport check_lemma1(const AlgebraSpec& spec, int n_samples,
                                std::uint64_t seed, double tol = 1e-9) {
  double violation = 0.0;
  const int d = spec.dim();
  for (int trial = 0; trial < n_samples; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    std::vector<Element> frame = random_spectral_frame(spec, rng);
    const int m = static_cast<int>(frame.size());
    std::vector<int> subset = detail::random_subset(rng, m);
    Element e = detail::sum_of(frame, subset);
    Element ec = Element::unit(spec) - e;
    Eigen::MatrixXd ue = quadratic_map(Event::trusted(e)).matrix;
    Eigen::MatrixXd uc = quadratic_map(Event::trusted(ec)).matrix;
    Eigen::MatrixXd te = spec.left_mult_matrix(e.coords);

    violation = std::max(violation, (ue * ue - ue).norm());
    violation = std::max(violation, (ue * uc).norm());
    violation = std::max(violation, (uc * ue).norm());
    violation = std::max(
        violation,
        (te - 0.5 * (Eigen::MatrixXd::Identity(d, d) + ue - uc)).norm());

    std::vector<int> sub;
    for (int k : subset)
      if (rng.uniform() < 0.5) sub.push_back(k);
    Element f = detail::sum_of(frame, sub);
    violation = std::max(violation, spec.norm(ue * f.coords - f.coords));
    violation = std::max(violation, spec.norm(uc * f.coords));
    violation = std::max(violation, spec.norm(te * f.coords - f.coords));

    std::vector<int> ortho;
    for (int k : detail::complement_of(subset, m))
      if (rng.uniform() < 0.5) ortho.push_back(k);
    Element g = detail::sum_of(frame, ortho);
    violation = std::max(violation, spec.norm(ue * g.coords));
    violation = std::max(violation, spec.norm(te * g.coords));
  }
  return detail::finish_report("lemma1", spec, n_samples, seed, tol,
                               violation);
}

/// Uniqueness of the conditional state: nu = mu(U_e .)/mu(e) has nu(e) = 1,
/// is a state, restricts classically below e, and is T_e-invariant.
inline CheckReport check_lemma2_uniqueness(const AlgebraSpec& spec,
                                           int n_samples, std::uint64_t seed,
                                           double tol = 1e-9) {
  double violation = 0.0;
  for (int trial = 0; trial < n_samples; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    State mu = random_state(spec, rng);
    std::vector<Element> frame = random_spectral_frame(spec, rng);
    const int m = static_cast<int>(frame.size());

    std::vector<int> subset;
    Element e = Element::zero(spec);
    for (int attempt = 0; attempt < 16; ++attempt) {
      subset = detail::random_subset(rng, m);
      if (subset.empty()) continue;
      e = detail::sum_of(frame, subset);
      if (mu(e) > 0.05) break;
    }
    if (mu(e) <= 0.05) continue;  // generically unreachable

    State nu = conditioned_state(mu, Event::trusted(e));
    violation = std::max(violation, std::abs(nu(e) - 1.0));
    violation = std::max(violation, std::abs(nu(Element::unit(spec)) - 1.0));
    violation = std::max(violation, -detail::min_eigenvalue(nu.density));

    std::vector<int> sub;
    for (int k : subset)
      if (rng.uniform() < 0.5) sub.push_back(k);
    Element f = detail::sum_of(frame, sub);
    violation = std::max(violation, std::abs(nu(f) - mu(f) / mu(e)));

    Eigen::MatrixXd te_adj = spec.adjoint(spec.left_mult_matrix(e.coords));
    violation = std::max(
        violation, spec.norm(te_adj * nu.density.coords - nu.density.coords));
  }
  return detail::finish_report("lemma2", spec, n_samples, seed, tol,
                               violation);
}

/// Exponentials of skew derivations are unital automorphisms of the
/// box-product and map events to events.
inline CheckReport check_lemma4_automorphism(const AlgebraSpec& spec,
                                             const LieAlgebraStructure& lie,
                                             int n_samples, std::uint64_t seed,
                                             double tol = 1e-9) {
  double violation = 0.0;
  for (int trial = 0; trial < n_samples; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    LinearOperator skew = random_skew_combination(lie, rng);
    double t = rng.uniform(-2.0, 2.0);
    Eigen::MatrixXd w = (t * skew.matrix).exp();

    Element a = random_element(spec, rng);
    Element b = random_element(spec, rng);
    Eigen::VectorXd lhs = w * spec.multiply_coords(a.coords, b.coords);
    Eigen::VectorXd rhs =
        spec.multiply_coords(w * a.coords, w * b.coords);
    violation = std::max(violation, spec.norm(lhs - rhs));
    violation = std::max(violation, spec.norm(w * spec.unit() - spec.unit()));

    std::vector<Element> frame = random_spectral_frame(spec, rng);
    std::vector<int> subset =
        detail::random_subset(rng, static_cast<int>(frame.size()));
    Element e = detail::sum_of(frame, subset);
    Element we(spec, w * e.coords);
    EventCheck chk = check_event(we);
    violation = std::max(violation, chk.idempotency_residual);
    violation = std::max(violation, chk.spectrum_distance);
  }
  return detail::finish_report("lemma4", spec, n_samples, seed, tol,
                               violation);
}

inline CheckReport check_lemma4_automorphism(const AlgebraSpec& spec,
                                             int n_samples, std::uint64_t seed,
                                             double tol = 1e-9) {
  return check_lemma4_automorphism(spec, skew_derivation_basis(spec),
                                   n_samples, seed, tol);
}

/// The derivation property transported to multiplication operators:
/// [D, R_a] = R_{D(a)}.
inline CheckReport check_lemma5(const AlgebraSpec& spec,
                                const LieAlgebraStructure& lie, int n_samples,
                                std::uint64_t seed, double tol = 1e-9) {
  double violation = 0.0;
  for (int trial = 0; trial < n_samples; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    LinearOperator skew = random_skew_combination(lie, rng);
    Element a = random_element(spec, rng);
    Eigen::MatrixXd ra = spec.right_mult_matrix(a.coords);
    Eigen::MatrixXd rda = spec.right_mult_matrix(skew.matrix * a.coords);
    violation = std::max(
        violation, (skew.matrix * ra - ra * skew.matrix - rda).norm());
  }
  return detail::finish_report("lemma5", spec, n_samples, seed, tol,
                               violation);
}

inline CheckReport check_lemma5(const AlgebraSpec& spec, int n_samples,
                                std::uint64_t seed, double tol = 1e-9) {
  return check_lemma5(spec, skew_derivation_basis(spec), n_samples, seed, tol);
}

/// [R_a, R_b] - R_{b box a - a box b} annihilates the unit and lies in the
/// span of the skew derivation basis.
inline CheckReport check_commutator_element(const AlgebraSpec& spec,
                                            const LieAlgebraStructure& lie,
                                            int n_samples, std::uint64_t seed,
                                            double tol = 1e-9) {
  double violation = 0.0;
  for (int trial = 0; trial < n_samples; ++trial) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(trial));
    Element a = random_element(spec, rng);
    Element b = random_element(spec, rng);
    Eigen::MatrixXd ra = spec.right_mult_matrix(a.coords);
    Eigen::MatrixXd rb = spec.right_mult_matrix(b.coords);
    Eigen::VectorXd ba_ab = spec.multiply_coords(b.coords, a.coords) -
                            spec.multiply_coords(a.coords, b.coords);
    Eigen::MatrixXd op = ra * rb - rb * ra - spec.right_mult_matrix(ba_ab);

    violation = std::max(violation, spec.norm(op * spec.unit()));
    Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(spec.dim(), spec.dim());
    for (const LinearOperator& basis_op : lie.basis)
      recon.noalias() +=
          (op.cwiseProduct(basis_op.matrix)).sum() * basis_op.matrix;
    violation = std::max(violation, (op - recon).norm());
  }
  return detail::finish_report("commutator", spec, n_samples, seed, tol,
                               violation);
}

inline CheckReport check_commutator_element(const AlgebraSpec& spec,
                                            int n_samples, std::uint64_t seed,
                                            double tol = 1e-9) {
  return check_commutator_element(spec, skew_derivation_basis(spec), n_samples,
                                  seed, tol);
}

}  // namespace oua

#endif  // OUA_CHECKS_HPP
