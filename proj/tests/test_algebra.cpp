#include "leftinv/algebra.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace leftinv;
using Catch::Matchers::WithinAbs;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

AlgebraVector basis_vec(int dim, int i, double scale = 1.0) {
  AlgebraVector v = AlgebraVector::Zero(dim);
  v[i] = scale;
  return v;
}

// Dense fixture of the se(3) structure constants: 1/sqrt(2) on direct cycles
// of the rotation indices, the five beta-weighted rotation/translation
// couplings, antisymmetry in the first two indices, zero elsewhere.
double expected_se3_constant(double beta, int i, int j, int k) {
  struct Entry {
    int i, j, k;
    double value;
  };
  const double sb = std::sqrt(beta);
  const Entry entries[] = {
      {0, 1, 2, kInvSqrt2},          {1, 2, 0, kInvSqrt2},
      {2, 0, 1, kInvSqrt2},          {0, 4, 5, kInvSqrt2},
      {0, 5, 4, -kInvSqrt2},         {1, 3, 5, -kInvSqrt2 / sb},
      {1, 5, 3, sb * kInvSqrt2},     {2, 3, 4, kInvSqrt2 / sb},
      {2, 4, 3, -sb * kInvSqrt2},
  };
  for (const Entry& e : entries) {
    if (e.i == i && e.j == j && e.k == k) return e.value;
    if (e.i == j && e.j == i && e.k == k) return -e.value;
  }
  return 0.0;
}

std::vector<LieGroupStructure> all_structures() {
  std::vector<LieGroupStructure> out;
  out.push_back(build_se3_structure(1.0));
  out.push_back(build_se3_structure(1.5));
  out.push_back(build_se3_structure(2.0));
  out.push_back(build_so3_structure());
  return out;
}

} // namespace

TEST_CASE("se3 structure matches the hardcoded constant fixture", "[algebra]") {
  for (const double beta : {1.0, 1.5, 2.0}) {
    const LieGroupStructure s = build_se3_structure(beta);
    REQUIRE(s.dim() == 6);
    REQUIRE(s.matrix_size() == 4);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k)
          CHECK_THAT(s.structure_constant(i, j, k),
                     WithinAbs(expected_se3_constant(beta, i, j, k), 1e-14));
  }
}

TEST_CASE("se3 builder examples", "[algebra]") {
  CHECK_THAT(build_se3_structure(1.5).structure_constant(0, 1, 2), WithinAbs(kInvSqrt2, 1e-15));
  CHECK_THAT(build_se3_structure(2.0).structure_constant(1, 5, 3), WithinAbs(1.0, 1e-15));
  CHECK_THAT(build_se3_structure(1.0).basis()[3](0, 3), WithinAbs(1.0, 0.0));
  CHECK_THROWS_AS(build_se3_structure(0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_se3_structure(-1.0), std::invalid_argument);
}

TEST_CASE("so3 structure", "[algebra]") {
  const LieGroupStructure s = build_so3_structure();
  REQUIRE(s.dim() == 3);
  REQUIRE(s.matrix_size() == 3);

  SECTION("bracket of the first two generators, against the commutator") {
    const Eigen::Matrix3d comm =
        s.basis()[0] * s.basis()[1] - s.basis()[1] * s.basis()[0];
    const AlgebraVector via_matrix = s.matrix_to_coords(comm);
    const AlgebraVector expected = basis_vec(3, 2, kInvSqrt2);
    CHECK((via_matrix - expected).norm() < 1e-15);
    CHECK((bracket(s, basis_vec(3, 0), basis_vec(3, 1)) - expected).norm() < 1e-15);
    CHECK_THAT(s.structure_constant(1, 2, 0), WithinAbs(kInvSqrt2, 1e-15));
    CHECK_THAT(s.structure_constant(2, 0, 1), WithinAbs(kInvSqrt2, 1e-15));
  }

  SECTION("metric matrix is the identity") {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK_THAT(inner(s, basis_vec(3, i), basis_vec(3, j)),
                   WithinAbs(i == j ? 1.0 : 0.0, 1e-15));
  }

  SECTION("ad* is skew-symmetric over all basis triples") {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          const double lhs = inner(s, ad_star(s, basis_vec(3, a), basis_vec(3, b)), basis_vec(3, c)) +
                             inner(s, ad_star(s, basis_vec(3, a), basis_vec(3, c)), basis_vec(3, b));
          CHECK_THAT(lhs, WithinAbs(0.0, 1e-15));
        }
  }
}

TEST_CASE("bracket examples", "[algebra]") {
  const LieGroupStructure s = build_se3_structure(1.5);
  CHECK((bracket(s, basis_vec(6, 0), basis_vec(6, 1)) - basis_vec(6, 2, kInvSqrt2)).norm() <
        1e-15);
  CHECK(bracket(s, basis_vec(6, 3), basis_vec(6, 4)).norm() == 0.0);

  oracles::Rng rng(7);
  const AlgebraVector x = rng.vector(6);
  CHECK(bracket(s, x, x).norm() < 1e-15);
  CHECK_THROWS_AS(bracket(s, AlgebraVector::Zero(3), x), std::invalid_argument);
}

TEST_CASE("bracket properties on random inputs", "[algebra]") {
  for (const LieGroupStructure& s : all_structures()) {
    oracles::Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
      const AlgebraVector x = rng.vector(s.dim());
      const AlgebraVector y = rng.vector(s.dim());
      const AlgebraVector z = rng.vector(s.dim());

      // antisymmetry
      CHECK((bracket(s, x, y) + bracket(s, y, x)).norm() < 1e-12);

      // agreement with the matrix commutator
      const Eigen::MatrixXd xm = s.coords_to_matrix(x);
      const Eigen::MatrixXd ym = s.coords_to_matrix(y);
      const AlgebraVector comm = s.matrix_to_coords(xm * ym - ym * xm);
      CHECK((bracket(s, x, y) - comm).norm() < 1e-12);

      // Jacobi identity
      const AlgebraVector jacobi = bracket(s, x, bracket(s, y, z)) +
                                   bracket(s, y, bracket(s, z, x)) +
                                   bracket(s, z, bracket(s, x, y));
      CHECK(jacobi.norm() < 1e-10);
    }
  }
}

TEST_CASE("inner product", "[algebra]") {
  const LieGroupStructure s = build_se3_structure(1.5);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK_THAT(inner(s, basis_vec(6, i), basis_vec(6, j)),
                 WithinAbs(i == j ? 1.0 : 0.0, 1e-15));

  const AlgebraVector v = 2.0 * basis_vec(6, 0) + basis_vec(6, 4);
  CHECK_THAT(inner(s, v, v), WithinAbs(5.0, 1e-15));

  // beta is absorbed by the normalization of e4
  for (const double beta : {1.0, 1.5, 2.0})
    CHECK_THAT(inner(build_se3_structure(beta), basis_vec(6, 3), basis_vec(6, 3)),
               WithinAbs(1.0, 1e-15));

  CHECK_THROWS_AS(inner(s, AlgebraVector::Zero(5), AlgebraVector::Zero(6)),
                  std::invalid_argument);
}

TEST_CASE("ad_star examples", "[algebra]") {
  const LieGroupStructure s = build_se3_structure(1.5);

  const AlgebraVector expected = basis_vec(6, 1, kInvSqrt2);
  CHECK((ad_star(s, basis_vec(6, 0), basis_vec(6, 2)) - expected).norm() < 1e-15);
  CHECK((oracles::ad_star_bruteforce(s, basis_vec(6, 0), basis_vec(6, 2)) - expected).norm() <
        1e-14);

  CHECK(ad_star(s, basis_vec(6, 4), basis_vec(6, 4)).norm() == 0.0);

  oracles::Rng rng(13);
  const AlgebraVector a = rng.vector(6);
  const AlgebraVector b = rng.vector(6);
  CHECK((ad_star(s, 2.0 * a, b) - 2.0 * ad_star(s, a, b)).norm() < 1e-13);
  CHECK_THROWS_AS(ad_star(s, AlgebraVector::Zero(4), b), std::invalid_argument);
}

TEST_CASE("ad_star duality on random triples", "[algebra]") {
  for (const LieGroupStructure& s : all_structures()) {
    oracles::Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
      const AlgebraVector a = rng.vector(s.dim());
      const AlgebraVector b = rng.vector(s.dim());
      const AlgebraVector c = rng.vector(s.dim());
      CHECK_THAT(inner(s, ad_star(s, a, b), c) - inner(s, b, bracket(s, a, c)),
                 WithinAbs(0.0, 1e-12));
    }
    // against the duality-based evaluation
    oracles::Rng rng2(19);
    for (int trial = 0; trial < 50; ++trial) {
      const AlgebraVector a = rng2.vector(s.dim());
      const AlgebraVector b = rng2.vector(s.dim());
      CHECK((ad_star(s, a, b) - oracles::ad_star_bruteforce(s, a, b)).norm() < 1e-12);
    }
  }
}

TEST_CASE("connection form examples", "[algebra]") {
  SECTION("alpha(e1, e1) vanishes for any beta") {
    for (const double beta : {1.0, 1.5, 2.0}) {
      const LieGroupStructure s = build_se3_structure(beta);
      CHECK(oracles::ad_star_bruteforce(s, basis_vec(6, 0), basis_vec(6, 0)).norm() < 1e-15);
      CHECK(connection_alpha(s, basis_vec(6, 0), basis_vec(6, 0)).norm() < 1e-15);
    }
  }

  SECTION("alpha(e2, e4) couples into e6 with the (1+beta) weight") {
    for (const double beta : {1.0, 1.5, 2.0}) {
      const LieGroupStructure s = build_se3_structure(beta);
      const double coeff = -(1.0 + beta) / (2.0 * std::sqrt(2.0) * std::sqrt(beta));
      const AlgebraVector got = connection_alpha(s, basis_vec(6, 1), basis_vec(6, 3));
      CHECK((got - basis_vec(6, 5, coeff)).norm() < 1e-14);
      if (beta == 1.0) CHECK_THAT(got[5], WithinAbs(-kInvSqrt2, 1e-15));
    }
  }

  SECTION("basis pairs match the structure-constant expansion") {
    const LieGroupStructure s = build_se3_structure(1.5);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const AlgebraVector got = connection_alpha(s, basis_vec(6, i), basis_vec(6, j));
        for (int k = 0; k < 6; ++k) {
          const double expected = 0.5 * (s.structure_constant(i, j, k) -
                                         s.structure_constant(j, k, i) +
                                         s.structure_constant(k, i, j));
          CHECK_THAT(got[k], WithinAbs(expected, 1e-12));
        }
      }
  }

  SECTION("bi-invariant case: alpha is half the bracket") {
    const LieGroupStructure s = build_so3_structure();
    oracles::Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      const AlgebraVector x = rng.vector(3);
      const AlgebraVector y = rng.vector(3);
      CHECK((connection_alpha(s, x, y) - 0.5 * bracket(s, x, y)).norm() < 1e-13);
    }
  }
}

TEST_CASE("connection form properties on random inputs", "[algebra]") {
  for (const LieGroupStructure& s : all_structures()) {
    oracles::Rng rng(29);
    for (int trial = 0; trial < 1000; ++trial) {
      const AlgebraVector x = rng.vector(s.dim());
      const AlgebraVector y = rng.vector(s.dim());
      const AlgebraVector z = rng.vector(s.dim());

      // torsion-freeness
      CHECK((connection_alpha(s, x, y) - connection_alpha(s, y, x) - bracket(s, x, y)).norm() <
            1e-12);

      // metric compatibility
      CHECK_THAT(inner(s, connection_alpha(s, x, y), z) + inner(s, y, connection_alpha(s, x, z)),
                 WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("coordinate/matrix views", "[algebra]") {
  const LieGroupStructure s = build_se3_structure(1.5);

  SECTION("unit coordinates expand to the basis matrices") {
    for (int i = 0; i < 6; ++i)
      CHECK((s.coords_to_matrix(basis_vec(6, i)) - s.basis()[i]).norm() == 0.0);
  }

  SECTION("round trip at machine precision") {
    oracles::Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      const AlgebraVector x = rng.vector(6, -10.0, 10.0);
      CHECK((s.matrix_to_coords(s.coords_to_matrix(x)) - x).norm() < 1e-12 * x.norm());
    }
  }

  SECTION("rejects matrices outside the span") {
    Eigen::MatrixXd m = s.coords_to_matrix(basis_vec(6, 0));
    m(3, 0) = 1e-3; // nonzero bottom row cannot come from se(3)
    CHECK_THROWS_AS(s.matrix_to_coords(m), std::domain_error);

    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(4, 4);
    sym(0, 0) = 1.0;
    CHECK_THROWS_AS(s.matrix_to_coords(sym), std::domain_error);

    CHECK_THROWS_AS(s.matrix_to_coords(Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(s.coords_to_matrix(AlgebraVector::Zero(5)), std::invalid_argument);
  }
}

TEST_CASE("structure constants equal the commutator oracle for every triple", "[algebra]") {
  for (const double beta : {1.0, 1.5, 2.0}) {
    const LieGroupStructure s = build_se3_structure(beta);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const Eigen::MatrixXd comm =
            s.basis()[i] * s.basis()[j] - s.basis()[j] * s.basis()[i];
        const AlgebraVector c = s.matrix_to_coords(comm);
        for (int k = 0; k < 6; ++k)
          CHECK_THAT(s.structure_constant(i, j, k), WithinAbs(c[k], 1e-15));
      }
  }
}
