#ifndef OUA_ALGEBRA_HPP
#define OUA_ALGEBRA_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "oua/composition.hpp"
#include "oua/errors.hpp"

namespace oua {

/// Sparse entry of the structure tensor: (e_i box e_j) has coefficient
/// `value` on basis vector e_k.
struct StructureEntry {
  int i, j, k;
  double value;
};

struct CatalogInfo {
  int n = 0;
  DivisionTag tag = DivisionTag::R;
};

/// A finite-dimensional order-unit space with a bilinear box-product,
/// given by structure constants. Immutable after construction.
class AlgebraSpec {
 public:
  /// Builds a spec from structure data. `unit` must be a two-sided
  /// multiplicative identity and `trace_form` symmetric positive definite;
  /// both are checked.
  static AlgebraSpec from_structure(
      int dim, const std::vector<StructureEntry>& structure,
      const Eigen::VectorXd& unit,
      const Eigen::MatrixXd& trace_form = Eigen::MatrixXd(),
      std::vector<std::string> labels = {},
      std::vector<Eigen::VectorXd> extreme_rays = {}) {
    if (dim <= 0) throw ValidationError("algebra dimension must be positive");
    if (unit.size() != dim)
      throw ValidationError("unit vector has wrong dimension");
    AlgebraSpec spec;
    spec.dim_ = dim;
    spec.lmul_slices_.assign(dim, Eigen::MatrixXd::Zero(dim, dim));
    spec.rmul_slices_.assign(dim, Eigen::MatrixXd::Zero(dim, dim));
    for (const auto& e : structure) {
      if (e.i < 0 || e.i >= dim || e.j < 0 || e.j >= dim || e.k < 0 ||
          e.k >= dim)
        throw ValidationError("structure entry index out of range");
      spec.lmul_slices_[e.i](e.k, e.j) += e.value;
      spec.rmul_slices_[e.j](e.k, e.i) += e.value;
    }
    spec.unit_ = unit;
    if (trace_form.size() == 0) {
      spec.trace_form_ = Eigen::MatrixXd::Identity(dim, dim);
    } else {
      if (trace_form.rows() != dim || trace_form.cols() != dim)
        throw ValidationError("trace form has wrong dimensions");
      if ((trace_form - trace_form.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("trace form is not symmetric");
      spec.trace_form_ = 0.5 * (trace_form + trace_form.transpose());
    }
    spec.trace_llt_.compute(spec.trace_form_);
    if (spec.trace_llt_.info() != Eigen::Success)
      throw ValidationError("trace form is not positive definite");
    spec.labels_ = std::move(labels);
    if (spec.labels_.empty())
      for (int i = 0; i < dim; ++i)
        spec.labels_.push_back("b" + std::to_string(i));
    if (static_cast<int>(spec.labels_.size()) != dim)
      throw ValidationError("label count does not match dimension");
    spec.extreme_rays_ = std::move(extreme_rays);
    for (const auto& r : spec.extreme_rays_)
      if (r.size() != dim)
        throw ValidationError("extreme ray has wrong dimension");

    // Unit must act as a two-sided identity.
    Eigen::MatrixXd t_unit = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd r_unit = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      t_unit += unit(i) * spec.lmul_slices_[i];
      r_unit += unit(i) * spec.rmul_slices_[i];
    }
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
    double err = std::max((t_unit - id).cwiseAbs().maxCoeff(),
                          (r_unit - id).cwiseAbs().maxCoeff());
    if (err > 1e-9)
      throw ValidationError(
          "unit is not a two-sided multiplicative identity (max error " +
          std::to_string(err) + ")");

    double asym = 0.0;
    for (int i = 0; i < dim; ++i)
      asym = std::max(
          asym, (spec.lmul_slices_[i] - spec.rmul_slices_[i]).cwiseAbs().maxCoeff());
    spec.commutative_ = asym <= 1e-12;
    return spec;
  }

  int dim() const { return dim_; }
  const Eigen::VectorXd& unit() const { return unit_; }
  const Eigen::MatrixXd& trace_form() const { return trace_form_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Eigen::VectorXd>& extreme_rays() const {
    return extreme_rays_;
  }
  bool commutative() const { return commutative_; }
  bool type_I2() const { return type_I2_; }
  const std::string& catalog_tag() const { return catalog_tag_; }
  const std::optional<CatalogInfo>& catalog() const { return catalog_; }
  /// Number of idempotents in a generic spectral decomposition; -1 when not
  /// known at construction time.
  int known_rank() const { return known_rank_; }

  double structure(int i, int j, int k) const {
    return lmul_slices_[i](k, j);
  }
  /// Matrix M_i with T_a = sum_i a_i M_i.
  const Eigen::MatrixXd& lmul_slice(int i) const { return lmul_slices_[i]; }
  /// Matrix N_j with R_b = sum_j b_j N_j.
  const Eigen::MatrixXd& rmul_slice(int j) const { return rmul_slices_[j]; }

  /// Coordinates of (a box b).
  Eigen::VectorXd multiply_coords(const Eigen::VectorXd& a,
                                  const Eigen::VectorXd& b) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
    for (int i = 0; i < dim_; ++i)
      if (a(i) != 0.0) out.noalias() += a(i) * (lmul_slices_[i] * b);
    return out;
  }

  Eigen::MatrixXd left_mult_matrix(const Eigen::VectorXd& a) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      if (a(i) != 0.0) m.noalias() += a(i) * lmul_slices_[i];
    return m;
  }

  Eigen::MatrixXd right_mult_matrix(const Eigen::VectorXd& a) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
      if (a(j) != 0.0) m.noalias() += a(j) * rmul_slices_[j];
    return m;
  }

  /// Trace-form inner product <a, b>.
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return a.dot(trace_form_ * b);
  }

  double norm(const Eigen::VectorXd& a) const {
    return std::sqrt(std::max(0.0, inner(a, a)));
  }

  /// Adjoint of an operator with respect to the trace form:
  /// G^{-1} M^T G.
  Eigen::MatrixXd adjoint(const Eigen::MatrixXd& m) const {
    return trace_llt_.solve(m.transpose() * trace_form_);
  }

  /// Sparse export of the structure tensor (exact nonzero entries).
  std::vector<StructureEntry> structure_entries() const {
    std::vector<StructureEntry> out;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k) {
          double v = lmul_slices_[i](k, j);
          if (v != 0.0) out.push_back({i, j, k, v});
        }
    return out;
  }

 private:
  friend AlgebraSpec build_hermitian_algebra(int n, DivisionTag tag);

  int dim_ = 0;
  std::vector<Eigen::MatrixXd> lmul_slices_;
  std::vector<Eigen::MatrixXd> rmul_slices_;
  Eigen::VectorXd unit_;
  Eigen::MatrixXd trace_form_;
  Eigen::LLT<Eigen::MatrixXd> trace_llt_;
  std::vector<std::string> labels_;
  std::vector<Eigen::VectorXd> extreme_rays_;
  std::string catalog_tag_;
  std::optional<CatalogInfo> catalog_;
  bool type_I2_ = false;
  bool commutative_ = false;
  int known_rank_ = -1;
};

/// A coordinate vector in a fixed algebra. The referenced spec must outlive
/// the element.
struct Element {
  const AlgebraSpec* algebra = nullptr;
  Eigen::VectorXd coords;

  Element() = default;
  Element(const AlgebraSpec& spec, Eigen::VectorXd c)
      : algebra(&spec), coords(std::move(c)) {
    if (coords.size() != spec.dim())
      throw UsageError("element coordinates have wrong dimension");
  }

  static Element zero(const AlgebraSpec& spec) {
    return Element(spec, Eigen::VectorXd::Zero(spec.dim()));
  }
  static Element unit(const AlgebraSpec& spec) {
    return Element(spec, spec.unit());
  }
  static Element basis(const AlgebraSpec& spec, int i) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(spec.dim());
    c(i) = 1.0;
    return Element(spec, std::move(c));
  }

  double norm() const { return algebra->norm(coords); }
};

inline void require_same_algebra(const Element& a, const Element& b) {
  if (a.algebra != b.algebra)
    throw UsageError("elements belong to different algebras");
}

inline Element operator+(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  return Element(*a.algebra, a.coords + b.coords);
}
inline Element operator-(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  return Element(*a.algebra, a.coords - b.coords);
}
inline Element operator*(double s, const Element& a) {
  return Element(*a.algebra, s * a.coords);
}
inline Element operator*(const Element& a, double s) { return s * a; }

/// a box b.
inline Element multiply(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  return Element(*a.algebra, a.algebra->multiply_coords(a.coords, b.coords));
}

inline double inner(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  return a.algebra->inner(a.coords, b.coords);
}

/// A d x d real matrix acting on algebra coordinates.
struct LinearOperator {
  const AlgebraSpec* algebra = nullptr;
  Eigen::MatrixXd matrix;

  LinearOperator() = default;
  LinearOperator(const AlgebraSpec& spec, Eigen::MatrixXd m)
      : algebra(&spec), matrix(std::move(m)) {
    if (matrix.rows() != spec.dim() || matrix.cols() != spec.dim())
      throw UsageError("operator matrix has wrong dimensions");
  }

  static LinearOperator identity(const AlgebraSpec& spec) {
    return LinearOperator(
        spec, Eigen::MatrixXd::Identity(spec.dim(), spec.dim()));
  }

  Element apply(const Element& x) const {
    if (x.algebra != algebra)
      throw UsageError("operator applied to element of another algebra");
    return Element(*algebra, matrix * x.coords);
  }
};

/// T_a: x -> a box x.
inline LinearOperator left_mult_operator(const Element& a) {
  return LinearOperator(*a.algebra, a.algebra->left_mult_matrix(a.coords));
}

/// R_a: x -> x box a.
inline LinearOperator right_mult_operator(const Element& a) {
  return LinearOperator(*a.algebra, a.algebra->right_mult_matrix(a.coords));
}

// ---------------------------------------------------------------------------
// Hermitian matrix algebras H_n(F)

namespace detail {

/// Dense n x n matrix with composition-algebra entries.
struct CompMatrix {
  int n = 0;
  DivisionTag tag = DivisionTag::R;
  std::vector<CompositionScalar> entries;

  CompMatrix(int n_, DivisionTag t)
      : n(n_), tag(t), entries(static_cast<std::size_t>(n_) * n_,
                               CompositionScalar(t)) {}
  CompositionScalar& at(int i, int j) { return entries[i * n + j]; }
  const CompositionScalar& at(int i, int j) const { return entries[i * n + j]; }
};

inline CompMatrix comp_mat_mul(const CompMatrix& x, const CompMatrix& y) {
  CompMatrix z(x.n, x.tag);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      CompositionScalar acc(x.tag);
      for (int k = 0; k < x.n; ++k)
        acc += comp_mul(x.at(i, k), y.at(k, j));
      z.at(i, j) = acc;
    }
  return z;
}

/// (XY + YX) / 2.
inline CompMatrix comp_mat_sym_product(const CompMatrix& x,
                                       const CompMatrix& y) {
  CompMatrix xy = comp_mat_mul(x, y);
  CompMatrix yx = comp_mat_mul(y, x);
  CompMatrix z(x.n, x.tag);
  for (std::size_t t = 0; t < z.entries.size(); ++t)
    z.entries[t] = 0.5 * (xy.entries[t] + yx.entries[t]);
  return z;
}

/// Re tr(X Y).
inline double comp_mat_trace_inner(const CompMatrix& x, const CompMatrix& y) {
  double tr = 0.0;
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k)
      tr += comp_mul(x.at(i, k), y.at(k, i)).real();
  return tr;
}

/// The orthonormal hermitian basis: E_ii, then for each i < j and each
/// division-algebra unit u, (u E_ij + conj(u) E_ji) / sqrt(2).
inline std::vector<CompMatrix> hermitian_basis(int n, DivisionTag tag) {
  const int k = division_dim(tag);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<CompMatrix> basis;
  for (int i = 0; i < n; ++i) {
    CompMatrix m(n, tag);
    m.at(i, i) = CompositionScalar(tag, 1.0);
    basis.push_back(m);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int t = 0; t < k; ++t) {
        CompMatrix m(n, tag);
        CompositionScalar u = CompositionScalar::unit(tag, t);
        m.at(i, j) = u * inv_sqrt2;
        m.at(j, i) = comp_conj(u) * inv_sqrt2;
        basis.push_back(m);
      }
  return basis;
}

inline std::vector<std::string> hermitian_labels(int n, DivisionTag tag) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    labels.push_back("E" + std::to_string(i + 1) + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int t = 0; t < division_dim(tag); ++t) {
        std::string s = "E" + std::to_string(i + 1) + std::to_string(j + 1);
        if (t > 0) s += "_" + unit_label(tag, t);
        labels.push_back(s);
      }
  return labels;
}

}  // namespace detail

/// Hermitian n x n matrices over R, C, H or O with the symmetrized matrix
/// product. The octonionic case exists only for n = 3.
inline AlgebraSpec build_hermitian_algebra(int n, DivisionTag tag) {
  if (n < 2)
    throw UnsupportedConstruction("hermitian algebra needs n >= 2");
  if (tag == DivisionTag::O && n != 3)
    throw UnsupportedConstruction(
        "octonionic hermitian matrices form an algebra of this class only "
        "for n = 3");

  const auto basis = detail::hermitian_basis(n, tag);
  const int d = static_cast<int>(basis.size());

  std::vector<StructureEntry> entries;
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      detail::CompMatrix prod =
          detail::comp_mat_sym_product(basis[p], basis[q]);
      for (int r = 0; r < d; ++r) {
        double c = detail::comp_mat_trace_inner(prod, basis[r]);
        if (std::abs(c) > 1e-14) entries.push_back({p, q, r, c});
      }
    }

  Eigen::VectorXd unit = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) unit(i) = 1.0;

  // Diagonal rank-1 projections seed the positivity sampling.
  std::vector<Eigen::VectorXd> rays;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(d);
    r(i) = 1.0;
    rays.push_back(r);
  }

  AlgebraSpec spec = AlgebraSpec::from_structure(
      d, entries, unit, Eigen::MatrixXd::Identity(d, d),
      detail::hermitian_labels(n, tag), rays);
  spec.catalog_ = CatalogInfo{n, tag};
  spec.catalog_tag_ = "H" + std::to_string(n) + "(" + division_name(tag) + ")";
  spec.type_I2_ = (n == 2);
  spec.known_rank_ = n;
  return spec;
}

/// Caller-supplied algebra. The unit is validated against the structure
/// tensor; extreme rays seed positivity sampling in the condition checks.
inline AlgebraSpec build_custom(int dim,
                                const std::vector<StructureEntry>& structure,
                                const Eigen::VectorXd& unit,
                                const Eigen::MatrixXd& trace_form,
                                std::vector<Eigen::VectorXd> extreme_rays = {},
                                std::vector<std::string> labels = {}) {
  return AlgebraSpec::from_structure(dim, structure, unit, trace_form,
                                     std::move(labels),
                                     std::move(extreme_rays));
}

// ---------------------------------------------------------------------------
// Complex-matrix bridge for H_n(R) and H_n(C)

/// Complex hermitian matrix represented by an element of H_n(R) or H_n(C).
inline Eigen::MatrixXcd hermitian_matrix_of(const Element& a) {
  const auto& cat = a.algebra->catalog();
  if (!cat || (cat->tag != DivisionTag::R && cat->tag != DivisionTag::C))
    throw UnsupportedConstruction(
        "complex matrix bridge requires an H_n(R) or H_n(C) catalog algebra");
  const int n = cat->n;
  const int k = division_dim(cat->tag);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = a.coords(i);
  int p = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int t = 0; t < k; ++t, ++p) {
        std::complex<double> u = (t == 0) ? std::complex<double>(1, 0)
                                          : std::complex<double>(0, 1);
        m(i, j) += a.coords(p) * u * inv_sqrt2;
        m(j, i) += a.coords(p) * std::conj(u) * inv_sqrt2;
      }
  return m;
}

/// Inverse of hermitian_matrix_of. The matrix must be hermitian and, for
/// H_n(R), real symmetric.
inline Element element_from_hermitian(const AlgebraSpec& spec,
                                      const Eigen::MatrixXcd& m) {
  const auto& cat = spec.catalog();
  if (!cat || (cat->tag != DivisionTag::R && cat->tag != DivisionTag::C))
    throw UnsupportedConstruction(
        "complex matrix bridge requires an H_n(R) or H_n(C) catalog algebra");
  const int n = cat->n;
  const int k = division_dim(cat->tag);
  const double sqrt2 = std::sqrt(2.0);
  Eigen::VectorXd coords = Eigen::VectorXd::Zero(spec.dim());
  for (int i = 0; i < n; ++i) coords(i) = m(i, i).real();
  int p = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int t = 0; t < k; ++t, ++p)
        coords(p) = (t == 0) ? m(i, j).real() * sqrt2 : m(i, j).imag() * sqrt2;
  return Element(spec, coords);
}

/// Element with the given diagonal in H_n(F); off-diagonal coordinates zero.
inline Element element_from_diagonal(const AlgebraSpec& spec,
                                     const std::vector<double>& diag) {
  const auto& cat = spec.catalog();
  if (!cat) throw UnsupportedConstruction("diagonal elements need a catalog algebra");
  if (static_cast<int>(diag.size()) != cat->n)
    throw UsageError("diagonal length does not match matrix size");
  Eigen::VectorXd coords = Eigen::VectorXd::Zero(spec.dim());
  for (int i = 0; i < cat->n; ++i) coords(i) = diag[i];
  return Element(spec, coords);
}

}  // namespace oua

#endif  // OUA_ALGEBRA_HPP
