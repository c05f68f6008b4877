#include <doctest.h>

#include <random>

#include "crnc/linalg.hpp"
#include "oracles.hpp"

using namespace crnc;

TEST_CASE("rational matrix parse and arithmetic") {
  RationalMatrix a = RationalMatrix::parse("1 -1/2; 0 3");
  CHECK(a.rows() == 2);
  CHECK(a(0, 1) == Rational(-1, 2));
  RationalMatrix b{{2, 0}, {1, 1}};
  RationalMatrix ab = a * b;
  CHECK(ab(0, 0) == Rational(3, 2));
  CHECK(ab(1, 0) == 3);
  CHECK((a - a).is_zero());
  CHECK(a.transpose()(1, 0) == Rational(-1, 2));
  CHECK_THROWS(RationalMatrix::parse("1 2; 3"));
}

TEST_CASE("rank and kernels agree with their definitions") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    RationalMatrix a = oracle::random_matrix(rng, 4, 6, -2, 2);
    if (t % 3 == 0) a.set_row(3, a.row(0));  // force a dependency
    KernelInfo k = rank_and_kernels(a);
    CHECK(k.rank + k.right_kernel.rows() == a.cols());
    CHECK(k.rank + k.left_kernel.rows() == a.rows());
    CHECK((a * k.right_kernel.transpose()).is_zero());
    CHECK((k.left_kernel * a).is_zero());
    CHECK(rank(k.right_kernel) == k.right_kernel.rows());
  }
}

TEST_CASE("right factor and kernel comparison") {
  RationalMatrix g{{-1, 1, 0}, {1, -1, 1}, {0, 0, -1}};
  RationalMatrix c = RationalMatrix{{2, 0, 1}, {1, 1, 0}} * g;
  auto b = solve_right_factor(g, c);
  REQUIRE(b);
  CHECK(*b * g == c);
  CHECK_FALSE(solve_right_factor(RationalMatrix{{1, 0}, {1, 0}}, RationalMatrix{{0, 1}}));
  CHECK(same_right_kernel(RationalMatrix{{1, 1, 0}}, RationalMatrix{{2, 2, 0}}));
  CHECK_FALSE(same_right_kernel(RationalMatrix{{1, 1, 0}}, RationalMatrix{{1, 0, 0}}));
}

TEST_CASE("mu_inf matches row sums and the limit definition") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    RationalMatrix a = oracle::random_matrix(rng, 5, 5, -4, 4);
    double exact = mu_inf(a).get_d();
    Eigen::MatrixXd d = a.to_double();
    CHECK(exact == doctest::Approx(oracle::mu_rows(d)));
    CHECK(exact == doctest::Approx(oracle::mu_limit(d)).epsilon(1e-5));
    CHECK(mu_inf(d) == doctest::Approx(exact));
  }
}

TEST_CASE("mu_inf is subadditive and positively homogeneous") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    RationalMatrix a = oracle::random_matrix(rng, 4, 4, -3, 3), b = oracle::random_matrix(rng, 4, 4, -3, 3);
    CHECK(mu_inf(a + b) <= mu_inf(a) + mu_inf(b));
    CHECK(mu_inf(a.scaled(Rational(5, 2))) == Rational(5, 2) * mu_inf(a));
  }
  CHECK(mu_inf(RationalMatrix::identity(3).scaled(-1)) == -1);
}

TEST_CASE("primitive integer vectors") {
  RationalVector v{Rational(1, 2), Rational(-3, 4), 0};
  RationalVector p = primitive_integer(v);
  CHECK(p == RationalVector{2, -3, 0});
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(to_string(oracle::q(4, 2)) == "2");
}
