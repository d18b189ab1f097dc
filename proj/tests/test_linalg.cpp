#include <doctest.h>

#include <cmath>

#include "ce/linalg.hpp"
#include "ce/rng.hpp"

using namespace ce;

TEST_SUITE("linalg") {

TEST_CASE("matvec and transpose round out") {
  Matrix m(2, 3);
  m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
  m(1, 0) = 4; m(1, 1) = 5; m(1, 2) = 6;
  const std::vector<double> x = {1.0, 0.0, -1.0};
  const auto y = matvec(m, x);
  CHECK(y[0] == doctest::Approx(-2.0));
  CHECK(y[1] == doctest::Approx(-2.0));

  const Matrix mt = transpose(m);
  CHECK(mt.rows() == 3);
  CHECK(mt(2, 1) == 6.0);

  const std::vector<double> z = {1.0, 1.0};
  const auto back = matvec_t(m, z);
  const auto back2 = matvec(mt, z);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(back2[i]));
}

TEST_CASE("jacobi recovers a known spectrum") {
  Matrix a(2, 2);
  a(0, 0) = 2; a(0, 1) = 1;
  a(1, 0) = 1; a(1, 1) = 2;
  const SymmetricEigen eig = eigen_symmetric(a);
  CHECK(eig.values[0] == doctest::Approx(3.0));
  CHECK(eig.values[1] == doctest::Approx(1.0));
}

TEST_CASE("jacobi reconstructs random symmetric matrices") {
  Rng rng(11);
  Matrix a(8, 8);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = r; c < 8; ++c) a(r, c) = a(c, r) = rng.uniform(-1.0, 1.0);
  }
  const SymmetricEigen eig = eigen_symmetric(a);

  // A == sum_i lambda_i v_i v_i^T
  Matrix rebuilt(8, 8);
  for (std::size_t i = 0; i < 8; ++i) {
    add_outer(rebuilt, eig.vectors.row(i), eig.vectors.row(i), eig.values[i]);
  }
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) CHECK(rebuilt(r, c) == doctest::Approx(a(r, c)).epsilon(1e-9));
  }

  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(squared_norm(eig.vectors.row(i)) == doctest::Approx(1.0));
    for (std::size_t j = i + 1; j < 8; ++j) {
      CHECK(dot(eig.vectors.row(i), eig.vectors.row(j)) == doctest::Approx(0.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("rng is reproducible and roughly uniform") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng rng(7);
  double total = 0.0;
  for (int i = 0; i < 10000; ++i) total += rng.uniform();
  CHECK(total / 10000.0 == doctest::Approx(0.5).epsilon(0.02));
}

}  // TEST_SUITE
