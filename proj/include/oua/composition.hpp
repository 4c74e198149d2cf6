#ifndef OUA_COMPOSITION_HPP
#define OUA_COMPOSITION_HPP

#include <array>
#include <cmath>
#include <string>

#include "oua/errors.hpp"

namespace oua {

/// The four composition algebras that can appear as matrix entries.
enum class DivisionTag { R, C, H, O };

inline int division_dim(DivisionTag tag) {
  switch (tag) {
    case DivisionTag::R: return 1;
    case DivisionTag::C: return 2;
    case DivisionTag::H: return 4;
    case DivisionTag::O: return 8;
  }
  return 0;
}

inline std::string division_name(DivisionTag tag) {
  switch (tag) {
    case DivisionTag::R: return "R";
    case DivisionTag::C: return "C";
    case DivisionTag::H: return "H";
    case DivisionTag::O: return "O";
  }
  return "?";
}

/// Name of the k-th basis unit (k = 0 is the real unit).
inline std::string unit_label(DivisionTag tag, int k) {
  static const char* quat[4] = {"1", "i", "j", "k"};
  if (tag == DivisionTag::O) return k == 0 ? "1" : "e" + std::to_string(k);
  return quat[k];
}

namespace detail {

// Cayley-Dickson doubling with the sign convention
//   (a,b)(c,d) = (ac - conj(d) b, da + b conj(c)).
// This convention is frozen: every structure constant downstream of the
// hermitian-matrix builders depends on it.
inline void cd_conj(const double* x, double* z, int n) {
  z[0] = x[0];
  for (int i = 1; i < n; ++i) z[i] = -x[i];
}

inline void cd_mul(const double* x, const double* y, double* z, int n) {
  if (n == 1) {
    z[0] = x[0] * y[0];
    return;
  }
  const int h = n / 2;
  const double* a = x;
  const double* b = x + h;
  const double* c = y;
  const double* d = y + h;
  double t1[8], t2[8], cj[8];
  // z_lo = a c - conj(d) b
  cd_mul(a, c, t1, h);
  cd_conj(d, cj, h);
  cd_mul(cj, b, t2, h);
  for (int i = 0; i < h; ++i) z[i] = t1[i] - t2[i];
  // z_hi = d a + b conj(c)
  cd_mul(d, a, t1, h);
  cd_conj(c, cj, h);
  cd_mul(b, cj, t2, h);
  for (int i = 0; i < h; ++i) z[h + i] = t1[i] + t2[i];
}

}  // namespace detail

/// A scalar in R, C, H or O, stored as real coordinates against the
/// Cayley-Dickson basis. Unused coordinates stay zero.
struct CompositionScalar {
  DivisionTag tag = DivisionTag::R;
  std::array<double, 8> coords{};

  CompositionScalar() = default;
  explicit CompositionScalar(DivisionTag t) : tag(t) {}
  CompositionScalar(DivisionTag t, double real) : tag(t) { coords[0] = real; }

  static CompositionScalar unit(DivisionTag t, int k) {
    CompositionScalar u(t);
    u.coords[static_cast<std::size_t>(k)] = 1.0;
    return u;
  }

  int dim() const { return division_dim(tag); }

  double real() const { return coords[0]; }

  CompositionScalar& operator+=(const CompositionScalar& rhs) {
    for (int i = 0; i < 8; ++i) coords[i] += rhs.coords[i];
    return *this;
  }
  CompositionScalar& operator-=(const CompositionScalar& rhs) {
    for (int i = 0; i < 8; ++i) coords[i] -= rhs.coords[i];
    return *this;
  }
  CompositionScalar& operator*=(double s) {
    for (int i = 0; i < 8; ++i) coords[i] *= s;
    return *this;
  }
};

inline CompositionScalar operator+(CompositionScalar a,
                                   const CompositionScalar& b) {
  return a += b;
}
inline CompositionScalar operator-(CompositionScalar a,
                                   const CompositionScalar& b) {
  return a -= b;
}
inline CompositionScalar operator*(CompositionScalar a, double s) {
  return a *= s;
}
inline CompositionScalar operator*(double s, CompositionScalar a) {
  return a *= s;
}

inline CompositionScalar comp_mul(const CompositionScalar& x,
                                  const CompositionScalar& y) {
  if (x.tag != y.tag)
    throw UsageError("comp_mul: mismatched division algebra tags");
  CompositionScalar z(x.tag);
  detail::cd_mul(x.coords.data(), y.coords.data(), z.coords.data(), x.dim());
  return z;
}

inline CompositionScalar comp_conj(const CompositionScalar& x) {
  CompositionScalar z(x.tag);
  detail::cd_conj(x.coords.data(), z.coords.data(), 8);
  return z;
}

/// The quadratic form N(x) = sum of squared coordinates.
/// Multiplicative: N(xy) = N(x) N(y).
inline double comp_norm(const CompositionScalar& x) {
  double n = 0.0;
  for (int i = 0; i < x.dim(); ++i) n += x.coords[i] * x.coords[i];
  return n;
}

inline double comp_abs(const CompositionScalar& x) {
  return std::sqrt(comp_norm(x));
}

}  // namespace oua

#endif  // OUA_COMPOSITION_HPP
