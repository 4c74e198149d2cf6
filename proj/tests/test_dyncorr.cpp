#include <Eigen/Dense>

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "oua/algebra.hpp"
#include "oua/derivations.hpp"
#include "oua/dyncorr.hpp"
#include "oua/rng.hpp"
#include "oua/spectral.hpp"
#include "oua/star_algebra.hpp"

namespace {

const oua::AlgebraSpec& algebra(int n, oua::DivisionTag tag) {
  static std::map<std::pair<int, int>, oua::AlgebraSpec> cache;
  auto key = std::make_pair(n, static_cast<int>(tag));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, oua::build_hermitian_algebra(n, tag)).first;
  return it->second;
}

const oua::LieAlgebraStructure& lie_of(int n, oua::DivisionTag tag) {
  static std::map<std::pair<int, int>, oua::LieAlgebraStructure> cache;
  auto key = std::make_pair(n, static_cast<int>(tag));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, oua::skew_derivation_basis(algebra(n, tag)))
             .first;
  return it->second;
}

// Commutator map in the concrete complex matrix model.
Eigen::MatrixXcd dmat(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& x) {
  const std::complex<double> iu(0.0, 1.0);
  return 0.5 * iu * (a * x - x * a);
}
Eigen::MatrixXcd rmat(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& x) {
  return 0.5 * (a * x + x * a);
}

// Bracket objective recomputed from scratch for a given psi.
double recompute_search_residual(const oua::AlgebraSpec& spec,
                                 const oua::LieAlgebraStructure& lie,
                                 const Eigen::MatrixXd& psi) {
  const int d = spec.dim();
  oua::DynamicalCorrespondence dc{&spec, &lie, psi};
  double num = 0.0, den = 0.0;
  for (int i = 0; i < d; ++i) {
    Eigen::MatrixXd di = dc.operator_of(Eigen::VectorXd::Unit(d, i));
    Eigen::MatrixXd ri = spec.rmul_slice(i);
    for (int j = i + 1; j < d; ++j) {
      Eigen::MatrixXd dj = dc.operator_of(Eigen::VectorXd::Unit(d, j));
      Eigen::MatrixXd rj = spec.rmul_slice(j);
      num += (di * dj - dj * di + ri * rj - rj * ri).squaredNorm();
      den += (ri * rj - rj * ri).squaredNorm();
    }
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("commutator correspondence identities hold in the matrix model") {
  // Independent of library plumbing: conditions (i) and (ii) for
  // D_a = i[a, .]/2 in plain complex arithmetic.
  const auto& spec = algebra(3, oua::DivisionTag::C);
  oua::Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXcd a =
        oua::hermitian_matrix_of(oua::random_element(spec, rng));
    Eigen::MatrixXcd b =
        oua::hermitian_matrix_of(oua::random_element(spec, rng));
    Eigen::MatrixXcd x =
        oua::hermitian_matrix_of(oua::random_element(spec, rng));
    Eigen::MatrixXcd lhs = dmat(a, dmat(b, x)) - dmat(b, dmat(a, x));
    Eigen::MatrixXcd rhs = rmat(a, rmat(b, x)) - rmat(b, rmat(a, x));
    REQUIRE((lhs + rhs).norm() < 1e-13);
    REQUIRE(dmat(a, a).norm() < 1e-13);
  }
}

TEST_CASE("canonical correspondence matches the matrix model") {
  const auto& spec = algebra(3, oua::DivisionTag::C);
  const auto& lie = lie_of(3, oua::DivisionTag::C);
  oua::DynamicalCorrespondence dc = oua::canonical_correspondence(spec, lie);

  oua::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    oua::Element a = oua::random_element(spec, rng);
    oua::Element x = oua::random_element(spec, rng);
    Eigen::MatrixXcd expected = dmat(oua::hermitian_matrix_of(a),
                                     oua::hermitian_matrix_of(x));
    oua::Element got = dc.cross(a, x);
    REQUIRE((oua::hermitian_matrix_of(got) - expected).norm() < 1e-12);
  }

  // D_I = 0 and diagonal matrices commute with diag(1,0,0).
  const int d = spec.dim();
  REQUIRE(dc.operator_of(spec.unit()).norm() < 1e-12);
  oua::Element p =
      oua::element_from_diagonal(spec, std::vector<double>{1.0, 0.0, 0.0});
  Eigen::MatrixXd dp = dc.operator_of(p.coords);
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd diag_basis = Eigen::VectorXd::Zero(d);
    diag_basis(k) = 1.0;  // E_kk comes first in the hermitian basis
    REQUIRE(spec.norm(dp * diag_basis) < 1e-12);
  }
}

TEST_CASE("verify_correspondence accepts canonical maps and rejects zero") {
  for (int n : {3, 4}) {
    const auto& spec = algebra(n, oua::DivisionTag::C);
    const auto& lie = lie_of(n, oua::DivisionTag::C);
    oua::DynamicalCorrespondence dc =
        oua::canonical_correspondence(spec, lie);
    oua::CorrespondenceReport rep = oua::verify_correspondence(dc);
    REQUIRE(rep.passed);
    REQUIRE(rep.max_residual < (n == 3 ? 1e-10 : 1e-9));
    REQUIRE(rep.unit_residual < 1e-12);

    // Antisymmetry of the derived cross product on random pairs.
    oua::Rng rng(17);
    for (int t = 0; t < 10; ++t) {
      oua::Element a = oua::random_element(spec, rng);
      oua::Element b = oua::random_element(spec, rng);
      REQUIRE((dc.cross(a, b) + dc.cross(b, a)).norm() < 1e-12);
      REQUIRE(dc.cross(a, a).norm() < 1e-12);
    }
  }

  const auto& spec = algebra(3, oua::DivisionTag::C);
  const auto& lie = lie_of(3, oua::DivisionTag::C);
  oua::DynamicalCorrespondence zero{
      &spec, &lie, Eigen::MatrixXd::Zero(lie.dim, spec.dim())};
  oua::CorrespondenceReport rep = oua::verify_correspondence(zero);
  REQUIRE_FALSE(rep.passed);
  double max_bracket = 0.0;
  for (int i = 0; i < spec.dim(); ++i)
    for (int j = i + 1; j < spec.dim(); ++j) {
      Eigen::MatrixXd ri = spec.rmul_slice(i), rj = spec.rmul_slice(j);
      max_bracket = std::max(max_bracket, (ri * rj - rj * ri).norm());
    }
  REQUIRE(rep.condition_i_residual == Catch::Approx(max_bracket));
  REQUIRE(max_bracket > 0.1);
}

TEST_CASE("search recovers a correspondence where one exists") {
  const auto& spec = algebra(3, oua::DivisionTag::C);
  const auto& lie = lie_of(3, oua::DivisionTag::C);
  oua::SearchResult res = oua::search_correspondence(spec, lie, 20, 60, 3);
  REQUIRE(res.exists_numerically);
  REQUIRE(res.best_residual <= 1e-9);
  REQUIRE(res.per_start.size() == 20);
  for (double r : res.per_start) REQUIRE(r >= res.best_residual - 1e-15);

  // Independent recomputation of the reported objective.
  REQUIRE(recompute_search_residual(spec, lie, res.best.psi) ==
          Catch::Approx(res.best_residual).margin(1e-12));
  // The linear antisymmetry constraints hold exactly on the null space.
  oua::CorrespondenceReport rep = oua::verify_correspondence(res.best);
  REQUIRE(rep.condition_ii_residual < 1e-9);
  REQUIRE(rep.passed);
}

TEST_CASE("search reports an empirical floor where no correspondence exists") {
  const auto& spec = algebra(3, oua::DivisionTag::R);
  const auto& lie = lie_of(3, oua::DivisionTag::R);
  oua::SearchResult res = oua::search_correspondence(spec, lie, 12, 60, 1);
  REQUIRE_FALSE(res.exists_numerically);
  REQUIRE(res.best_residual >= 1e-3);
  REQUIRE(res.per_start.size() == 12);
  REQUIRE_THAT(res.note, Catch::Matchers::ContainsSubstring("not a proof"));
  REQUIRE(recompute_search_residual(spec, lie, res.best.psi) ==
          Catch::Approx(res.best_residual).margin(1e-12));
}

TEST_CASE("search handles a one-dimensional algebra") {
  std::vector<oua::StructureEntry> entries = {{0, 0, 0, 1.0}};
  Eigen::VectorXd unit(1);
  unit << 1.0;
  oua::AlgebraSpec spec = oua::build_custom(
      1, entries, unit, Eigen::MatrixXd::Identity(1, 1));
  oua::LieAlgebraStructure lie = oua::skew_derivation_basis(spec);
  REQUIRE(lie.dim == 0);
  oua::SearchResult res = oua::search_correspondence(spec, lie, 5, 10, 0);
  REQUIRE(res.exists_numerically);
  REQUIRE(res.best_residual == 0.0);
  REQUIRE(res.best.psi.isZero(0.0));
}

TEST_CASE("theorem construction yields the complex matrix algebra") {
  const auto& spec = algebra(3, oua::DivisionTag::C);
  const auto& lie = lie_of(3, oua::DivisionTag::C);
  oua::DynamicalCorrespondence dc = oua::canonical_correspondence(spec, lie);
  oua::Theorem1Result res = oua::theorem1_construct(spec, dc);
  const oua::Theorem1Report& rep = res.report;
  REQUIRE(rep.associativity_residual < 1e-10);
  REQUIRE(rep.involution_residual < 1e-10);
  REQUIRE(rep.symmetrized_residual < 1e-10);
  REQUIRE(rep.cross_antisymmetry_residual < 1e-10);
  REQUIRE(rep.identity1_residual < 1e-10);
  REQUIRE(rep.identity2_residual < 1e-10);
  REQUIRE(rep.unit_residual < 1e-12);

  // Oracle: the product must agree with honest matrix arithmetic through
  // Phi(x + iy) = M(x) + iM(y), up to the direction of multiplication.
  const oua::ComplexStarAlgebra& csa = res.algebra;
  oua::MatrixModelReport mm = oua::matrix_model_report(csa);
  REQUIRE(mm.isomorphism_residual < 1e-12);
  REQUIRE(mm.star_residual < 1e-12);
  REQUIRE(mm.unit_residual < 1e-12);
  REQUIRE(mm.bijectivity_sigma_min > 0.9);

  auto phi = [&](const oua::CStarElement& u) {
    const std::complex<double> iu(0.0, 1.0);
    return (oua::hermitian_matrix_of(oua::Element(spec, u.re)) +
            iu * oua::hermitian_matrix_of(oua::Element(spec, u.im)))
        .eval();
  };
  oua::Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    oua::CStarElement x{oua::random_element(spec, rng).coords,
                        oua::random_element(spec, rng).coords};
    oua::CStarElement y{oua::random_element(spec, rng).coords,
                        oua::random_element(spec, rng).coords};
    Eigen::MatrixXcd lhs = phi(csa.multiply(x, y));
    Eigen::MatrixXcd direct = phi(x) * phi(y);
    Eigen::MatrixXcd anti = phi(y) * phi(x);
    double err = mm.transposed ? (lhs - anti).norm() : (lhs - direct).norm();
    REQUIRE(err < 1e-12);
    // C* norm equals the operator norm of the model matrix.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(phi(x));
    REQUIRE(csa.cstar_norm(x) ==
            Catch::Approx(svd.singularValues()(0)).margin(1e-10));
  }

  // (a + i0)(I + i0) = a + i0.
  oua::CStarElement a = csa.embed(oua::random_element(spec, rng));
  oua::CStarElement au = csa.multiply(a, csa.unit());
  REQUIRE(spec.norm(au.re - a.re) < 1e-12);
  REQUIRE(spec.norm(au.im) < 1e-12);
}

TEST_CASE("construction refuses a map that is not a correspondence") {
  const auto& spec = algebra(3, oua::DivisionTag::C);
  const auto& lie = lie_of(3, oua::DivisionTag::C);
  oua::DynamicalCorrespondence zero{
      &spec, &lie, Eigen::MatrixXd::Zero(lie.dim, spec.dim())};
  REQUIRE_THROWS_AS(oua::theorem1_construct(spec, zero), oua::UsageError);
}

TEST_CASE("corollary checks pass on the reconstructed algebra") {
  const auto& spec = algebra(3, oua::DivisionTag::C);
  const auto& lie = lie_of(3, oua::DivisionTag::C);
  oua::DynamicalCorrespondence dc = oua::canonical_correspondence(spec, lie);
  oua::Theorem1Result res = oua::theorem1_construct(spec, dc);
  oua::CheckReport rep = oua::corollary1_checks(spec, res.algebra, 50, 7);
  REQUIRE(rep.passed);
  REQUIRE(rep.max_violation <= 1e-8);
  REQUIRE(rep.samples == 50);

  // ||I|| = 1 and ||a + i0|| = order-unit norm of a.
  const oua::ComplexStarAlgebra& csa = res.algebra;
  REQUIRE(csa.cstar_norm(csa.unit()) == Catch::Approx(1.0));
  oua::Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    oua::Element a = oua::random_element(spec, rng);
    REQUIRE(csa.cstar_norm(csa.embed(a)) ==
            Catch::Approx(oua::order_unit_norm(a)).margin(1e-10));
  }
}

TEST_CASE("search is deterministic under the seed") {
  const auto& spec = algebra(3, oua::DivisionTag::C);
  const auto& lie = lie_of(3, oua::DivisionTag::C);
  oua::SearchResult a = oua::search_correspondence(spec, lie, 6, 40, 42);
  oua::SearchResult b = oua::search_correspondence(spec, lie, 6, 40, 42);
  REQUIRE(a.best_residual == b.best_residual);
  REQUIRE(a.per_start == b.per_start);
  REQUIRE(a.best.psi == b.best.psi);
}
