#ifndef OUA_LOGIC_HPP
#define OUA_LOGIC_HPP

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "oua/algebra.hpp"
#include "oua/errors.hpp"
#include "oua/rng.hpp"
#include "oua/spectral.hpp"

namespace oua {

/// Conditioning on an event of probability ~0.
class UndefinedConditioningError : public UsageError {
 public:
  explicit UndefinedConditioningError(const std::string& what)
      : UsageError(what) {}
};

// Probability below this cutoff is treated as zero when conditioning;
// dividing by it would only amplify noise.
inline constexpr double kConditioningCutoff = 1e-12;

struct EventCheck {
  double idempotency_residual = 0.0;
  double spectrum_distance = 0.0;
  bool ok(double tol_idem = 1e-9, double tol_spec = 1e-7) const {
    return idempotency_residual <= tol_idem && spectrum_distance <= tol_spec;
  }
};

/// Residuals of the event axioms: || e box e - e || and the distance of the
/// spectrum from {0, 1}.
inline EventCheck check_event(const Element& e) {
  EventCheck out;
  out.idempotency_residual = (multiply(e, e) - e).norm();
  try {
    double dist = 0.0;
    for (double v : spectrum(e))
      dist = std::max(dist, std::min(std::abs(v), std::abs(v - 1.0)));
    out.spectrum_distance = dist;
  } catch (const FormalRealityError&) {
    out.spectrum_distance = 1.0;
  }
  return out;
}

/// An extreme point of [0, I]: an idempotent with spectrum in {0, 1}.
struct Event {
  Element element;

  static Event validated(Element e) {
    EventCheck chk = check_event(e);
    if (!chk.ok())
      throw ValidationError(
          "element is not an event (idempotency residual " +
          std::to_string(chk.idempotency_residual) + ", spectrum distance " +
          std::to_string(chk.spectrum_distance) + ")");
    return Event{std::move(e)};
  }

  /// Wraps without validation; for elements constructed as idempotents.
  static Event trusted(Element e) { return Event{std::move(e)}; }

  const AlgebraSpec& algebra() const { return *element.algebra; }
};

/// e' = I - e.
inline Event orthocomplement(const Event& e) {
  return Event::validated(Element::unit(e.algebra()) - e.element);
}

/// e and f are orthogonal iff e + f is again an event.
inline bool is_orthogonal(const Event& e, const Event& f) {
  require_same_algebra(e.element, f.element);
  return check_event(e.element + f.element).ok();
}

/// U_e = 2 T_e^2 - T_e.
inline LinearOperator quadratic_map(const Event& e) {
  Eigen::MatrixXd t = e.algebra().left_mult_matrix(e.element.coords);
  return LinearOperator(e.algebra(), 2.0 * (t * t) - t);
}

/// A state as a trace-form density: mu(x) = <rho, x>, rho positive,
/// mu(I) = 1.
struct State {
  Element density;

  static State from_density(Element rho, double tol = 1e-7) {
    double total = inner(rho, Element::unit(*rho.algebra));
    if (std::abs(total - 1.0) > 1e-6)
      throw ValidationError("density is not normalized");
    if (!is_positive(rho, tol))
      throw ValidationError("density is not positive");
    rho.coords /= total;
    return State{std::move(rho)};
  }

  double operator()(const Element& x) const { return inner(density, x); }

  const AlgebraSpec& algebra() const { return *density.algebra; }
};

/// rho = b^2 / <b^2, I> for a random b.
inline State random_state(const AlgebraSpec& spec, Rng& rng,
                          int max_retries = 32) {
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Element b = random_element(spec, rng);
    Element sq = multiply(b, b);
    double total = inner(sq, Element::unit(spec));
    if (total <= 1e-10 * std::max(1.0, sq.norm())) continue;
    sq.coords /= total;
    return State{std::move(sq)};
  }
  throw NumericalError("failed to draw a nondegenerate state");
}

inline State random_state(const AlgebraSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return random_state(spec, rng);
}

/// mu(f | e) = mu(U_e f) / mu(e).
inline double conditional_probability(const State& mu, const Event& e,
                                      const Event& f) {
  require_same_algebra(e.element, f.element);
  require_same_algebra(mu.density, e.element);
  double pe = mu(e.element);
  if (pe <= kConditioningCutoff)
    throw UndefinedConditioningError(
        "conditional probability undefined: mu(e) = " + std::to_string(pe));
  return mu(quadratic_map(e).apply(f.element)) / pe;
}

/// The state f -> mu(f | e), represented by the density U_e^dagger rho /
/// mu(e).
inline State conditioned_state(const State& mu, const Event& e) {
  const AlgebraSpec& spec = mu.algebra();
  double pe = mu(e.element);
  if (pe <= kConditioningCutoff)
    throw UndefinedConditioningError(
        "conditioned state undefined: mu(e) = " + std::to_string(pe));
  Eigen::MatrixXd u_adj = spec.adjoint(quadratic_map(e).matrix);
  Eigen::VectorXd rho = (u_adj * mu.density.coords) / pe;
  return State{Element(spec, std::move(rho))};
}

}  // namespace oua

#endif  // OUA_LOGIC_HPP
