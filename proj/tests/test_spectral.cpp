#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "oua/algebra.hpp"
#include "oua/errors.hpp"
#include "oua/rng.hpp"
#include "oua/spectral.hpp"

using namespace oua;

namespace {

const AlgebraSpec& h3r() {
  static const AlgebraSpec spec = build_hermitian_algebra(3, DivisionTag::R);
  return spec;
}
const AlgebraSpec& h3c() {
  static const AlgebraSpec spec = build_hermitian_algebra(3, DivisionTag::C);
  return spec;
}
const AlgebraSpec& h3o() {
  static const AlgebraSpec spec = build_hermitian_algebra(3, DivisionTag::O);
  return spec;
}

}  // namespace

TEST_CASE("minimal polynomial of the unit") {
  auto p = minimal_polynomial(Element::unit(h3c()));
  REQUIRE(p.size() == 2);
  REQUIRE(p[0] == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(p[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("minimal polynomial of an idempotent") {
  Element e = element_from_diagonal(h3c(), {1.0, 0.0, 0.0});
  auto p = minimal_polynomial(e);  // t^2 - t
  REQUIRE(p.size() == 3);
  REQUIRE(p[0] == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(p[1] == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(p[2] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("minimal polynomial of diag(1,2,3)") {
  Element a = element_from_diagonal(h3r(), {1.0, 2.0, 3.0});
  auto p = minimal_polynomial(a);  // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
  REQUIRE(p.size() == 4);
  REQUIRE(p[0] == Catch::Approx(-6.0).margin(1e-9));
  REQUIRE(p[1] == Catch::Approx(11.0).margin(1e-9));
  REQUIRE(p[2] == Catch::Approx(-6.0).margin(1e-9));
  REQUIRE(p[3] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("spectral decomposition of an idempotent") {
  Element e = element_from_diagonal(h3c(), {1.0, 1.0, 0.0});
  SpectralDecomposition sd = spectral_decompose(e);
  REQUIRE(sd.eigenvalues.size() == 2);
  REQUIRE(sd.eigenvalues[0] == Catch::Approx(0.0).margin(1e-10));
  REQUIRE(sd.eigenvalues[1] == Catch::Approx(1.0).margin(1e-10));
  REQUIRE((sd.idempotents[1] - e).norm() < 1e-9);
  REQUIRE((sd.idempotents[0] - (Element::unit(h3c()) - e)).norm() < 1e-9);
}

TEST_CASE("spectral decomposition of diag(1,2,3)") {
  Element a = element_from_diagonal(h3r(), {1.0, 2.0, 3.0});
  SpectralDecomposition sd = spectral_decompose(a);
  REQUIRE(sd.eigenvalues.size() == 3);
  for (int k = 0; k < 3; ++k) {
    REQUIRE(sd.eigenvalues[k] == Catch::Approx(k + 1.0).margin(1e-9));
    std::vector<double> diag(3, 0.0);
    diag[static_cast<std::size_t>(k)] = 1.0;
    REQUIRE((sd.idempotents[k] - element_from_diagonal(h3r(), diag)).norm() <
            1e-9);
  }
}

TEST_CASE("random elements reconstruct from their spectral data") {
  Rng rng(31);
  for (DivisionTag tag : {DivisionTag::R, DivisionTag::C, DivisionTag::H,
                          DivisionTag::O}) {
    const AlgebraSpec spec = build_hermitian_algebra(3, tag);
    for (int trial = 0; trial < 25; ++trial) {
      Element a = random_element(spec, rng);
      SpectralDecomposition sd = spectral_decompose(a);
      Element acc = Element::zero(spec);
      Element sum = Element::zero(spec);
      for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
        acc = acc + sd.eigenvalues[k] * sd.idempotents[k];
        sum = sum + sd.idempotents[k];
      }
      REQUIRE((acc - a).norm() < 1e-8);
      REQUIRE((sum - Element::unit(spec)).norm() < 1e-8);
      for (std::size_t j = 0; j < sd.idempotents.size(); ++j)
        for (std::size_t k = j + 1; k < sd.idempotents.size(); ++k)
          REQUIRE(multiply(sd.idempotents[j], sd.idempotents[k]).norm() <
                  1e-8);
      for (const Element& f : sd.idempotents)
        REQUIRE((multiply(f, f) - f).norm() < 1e-8);
    }
  }
}

TEST_CASE("eigenvalues match the hermitian eigendecomposition") {
  Rng rng(32);
  for (int n : {2, 3, 4}) {
    const AlgebraSpec spec = build_hermitian_algebra(n, DivisionTag::C);
    for (int trial = 0; trial < 100; ++trial) {
      Element a = random_element(spec, rng);
      std::vector<double> ours = spectrum(a);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
          hermitian_matrix_of(a));
      Eigen::VectorXd ref = es.eigenvalues();
      REQUIRE(static_cast<int>(ours.size()) == n);  // generic draw
      for (int k = 0; k < n; ++k)
        REQUIRE(ours[static_cast<std::size_t>(k)] ==
                Catch::Approx(ref(k)).margin(1e-8));
    }
  }
}

TEST_CASE("positivity and order-unit norm") {
  Rng rng(33);
  REQUIRE(order_unit_norm(Element::unit(h3c())) == Catch::Approx(1.0));
  Element mixed = element_from_diagonal(h3r(), {1.0, -1.0, 0.0});
  REQUIRE_FALSE(is_positive(mixed));
  REQUIRE(order_unit_norm(mixed) == Catch::Approx(1.0).margin(1e-10));
  for (int trial = 0; trial < 25; ++trial) {
    Element a = random_element(h3o(), rng);
    REQUIRE(is_positive(multiply(a, a)));
  }
}

TEST_CASE("order-unit norm agrees with the interval definition") {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    Element a = random_element(h3c(), rng);
    double t = order_unit_norm(a);
    Element one = Element::unit(h3c());
    REQUIRE(is_positive(t * one - a, 1e-8));
    REQUIRE(is_positive(t * one + a, 1e-8));
    // Binary search for the smallest multiple that dominates both signs.
    double lo = 0.0, hi = t + 1.0;
    for (int it = 0; it < 40; ++it) {
      double mid = 0.5 * (lo + hi);
      if (is_positive(mid * one - a, 0.0) && is_positive(mid * one + a, 0.0))
        hi = mid;
      else
        lo = mid;
    }
    REQUIRE(hi == Catch::Approx(t).margin(1e-6));
  }
}

TEST_CASE("random idempotents and frames") {
  Rng rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Element> frame = random_spectral_frame(h3o(), rng);
    REQUIRE(static_cast<int>(frame.size()) == 3);
    Element sum = Element::zero(h3o());
    for (const Element& f : frame) sum = sum + f;
    REQUIRE((sum - Element::unit(h3o())).norm() < 1e-8);

    Element e = random_idempotent(h3o(), 1 + rng.index(3), rng);
    REQUIRE((multiply(e, e) - e).norm() < 1e-9);
    Element comp = Element::unit(h3o()) - e;
    REQUIRE(multiply(e, comp).norm() < 1e-9);
  }
  REQUIRE((random_idempotent(h3c(), 3, rng) - Element::unit(h3c())).norm() <
          1e-9);
}

TEST_CASE("non-formally-real inputs are flagged") {
  // C as a 2-dimensional commutative real algebra; the generator i has
  // minimal polynomial t^2 + 1 with no real roots.
  std::vector<StructureEntry> entries = {
      {0, 0, 0, 1.0}, {0, 1, 1, 1.0}, {1, 0, 1, 1.0}, {1, 1, 0, -1.0}};
  Eigen::VectorXd u(2);
  u << 1.0, 0.0;
  AlgebraSpec complexes =
      build_custom(2, entries, u, Eigen::MatrixXd::Identity(2, 2));
  Element i = Element::basis(complexes, 1);
  REQUIRE_THROWS_AS(spectral_decompose(i), FormalRealityError);
}

TEST_CASE("noncommutative specs are not spectrally decomposed") {
  // 2x2 upper triangular matrices with unit basis {I, N}: I N = N I = N,
  // N N = 0 is commutative; instead build a genuinely noncommutative one:
  // basis {I, A, B} with A box B = A, B box A = 0 and all other products 0
  // violates commutativity while keeping I an identity.
  std::vector<StructureEntry> entries = {
      {0, 0, 0, 1.0}, {0, 1, 1, 1.0}, {1, 0, 1, 1.0},
      {0, 2, 2, 1.0}, {2, 0, 2, 1.0}, {1, 2, 1, 1.0}};
  Eigen::VectorXd u(3);
  u << 1.0, 0.0, 0.0;
  AlgebraSpec nc = build_custom(3, entries, u, Eigen::MatrixXd::Identity(3, 3));
  REQUIRE_FALSE(nc.commutative());
  REQUIRE_THROWS_AS(minimal_polynomial(Element::basis(nc, 1)),
                    UnsupportedConstruction);
}

TEST_CASE("random element generation is deterministic under a seed") {
  Rng a(99), b(99);
  Element x = random_element(h3c(), a);
  Element y = random_element(h3c(), b);
  REQUIRE((x - y).norm() == 0.0);
}
