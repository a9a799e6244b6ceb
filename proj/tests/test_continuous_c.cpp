#include <doctest.h>

#include <cmath>
#include <vector>

#include "simplex_lab/continuous_c.hpp"

using namespace simplex_lab;

TEST_CASE("existence") {
  CHECK(exists_probability(2.0, 5));
  CHECK(exists_probability(2.5, 2));
  CHECK_FALSE(exists_probability(0.5, 1));
  CHECK_FALSE(exists_probability(1.5, 2));
  CHECK(exists_probability(1.0 + 1e-13, 3));
  CHECK_FALSE(exists_probability(1.0 + 1e-9, 3));
  CHECK_THROWS(exists_probability(0.0, 2));
}

TEST_CASE("nu weights against the explicit d = 2 display") {
  // 1/((c+1)(c+2)) * (2 per vertex, 2(c-1) per edge, (c-1)(c-2) interior).
  for (double c : {1.0, 2.0, 3.0, 4.5}) {
    const NuSpec nu = nu_weights(c, 2);
    const double z = (c + 1.0) * (c + 2.0);
    CHECK(nu.per_face(0) == doctest::Approx(2.0 / z).epsilon(1e-14));
    CHECK(nu.per_face(1) == doctest::Approx(2.0 * (c - 1.0) / z).epsilon(1e-14));
    CHECK(nu.per_face(2) == doctest::Approx((c - 1.0) * (c - 2.0) / z).epsilon(1e-14));
    CHECK(nu.dim_weights[0] == doctest::Approx(6.0 / z).epsilon(1e-14));
    CHECK(nu.dim_weights[1] == doctest::Approx(6.0 * (c - 1.0) / z).epsilon(1e-14));
  }
  const NuSpec two = nu_weights(2.0, 2);
  CHECK(two.per_face(0) == doctest::Approx(1.0 / 6.0));
  CHECK(two.per_face(1) == doctest::Approx(1.0 / 6.0));
  CHECK(two.per_face(2) == 0.0);
}

TEST_CASE("nu weights sum to one and are signed exactly when nonexistent") {
  for (double c : {0.5, 1.0, 2.0, 2.5, 7.0}) {
    for (int d = 1; d <= 4; ++d) {
      const NuSpec nu = nu_weights(c, d);
      double sum = 0.0;
      bool nonnegative = true;
      for (double w : nu.dim_weights) {
        sum += w;
        nonnegative = nonnegative && w >= -1e-14;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
      CHECK(nonnegative == exists_probability(c, d));
    }
  }
  for (int d = 1; d <= 5; ++d) {
    const NuSpec one = nu_weights(1.0, d);
    CHECK(one.dim_weights[0] == doctest::Approx(1.0));
    for (int k = 1; k <= d; ++k) CHECK(one.dim_weights[static_cast<std::size_t>(k)] == 0.0);
  }
}

TEST_CASE("integer c matches B_c(1,...,1) by dimension") {
  for (int d = 1; d <= 4; ++d) {
    const DirichletParams ones(std::vector<double>(static_cast<std::size_t>(d + 1), 1.0));
    for (int c = 1; c <= d + 2; ++c) {
      const FaceMasses w = face_weights(c, ones);
      std::vector<double> by_dim(static_cast<std::size_t>(d + 1), 0.0);
      for (const FaceSubset& t : w.faces()) by_dim[static_cast<std::size_t>(t.size() - 1)] += w[t];
      const NuSpec nu = nu_weights(c, d);
      for (int k = 0; k <= d; ++k)
        CHECK(std::abs(nu.dim_weights[static_cast<std::size_t>(k)] - by_dim[static_cast<std::size_t>(k)]) < 1e-10);
    }
  }
}

TEST_CASE("face transform") {
  RngStream rng(3);
  const std::vector<double> f = {1.0, 2.0, 4.0};
  const std::vector<int> v = {1};
  CHECK(face_transform(f, v, 3.0, 1000, rng).value == doctest::Approx(0.125));

  // Edge {0,2}: integral_0^1 (1 + 3x)^{-c} dx.
  const std::vector<int> edge = {0, 2};
  const double c = 2.5;
  const double expected = (1.0 - std::pow(4.0, 1.0 - c)) / (3.0 * (c - 1.0));
  const FaceIntegral fi = face_transform(f, edge, c, 1000, rng);
  CHECK_FALSE(fi.monte_carlo);
  CHECK(fi.value == doctest::Approx(expected).epsilon(1e-13));

  // c = 1 on an edge is singular for the closed form.
  const FaceIntegral sing = face_transform(f, edge, 1.0, 200000, rng);
  CHECK(sing.monte_carlo);
  CHECK(std::abs(sing.value - std::log(4.0) / 3.0) <= 4.0 * sing.std_error);
}

TEST_CASE("nu transform identity") {
  RngStream rng(5);
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  const CpReport flat = verify_cp(2.0, 2, ones, 200000, rng);
  CHECK(flat.pass);
  CHECK(flat.rhs == doctest::Approx(1.0));

  const std::vector<double> f = {1.0, 2.0, 3.0};
  const CpReport main = verify_cp(3.5, 2, f, 200000, rng);
  CHECK_FALSE(main.monte_carlo);
  CHECK(main.relative_error < 1e-8);
  CHECK(main.pass);

  // d = 1, c = 2, f = (1,2): nu = (1/3)(delta_0 + delta_1) + (1/3) lambda_01.
  const std::vector<double> f2 = {1.0, 2.0};
  const CpReport one = verify_cp(2.0, 1, f2, 200000, rng);
  const double lhs = (1.0 + 0.25) / 3.0 + (1.0 / 3.0) * 0.5;
  CHECK(one.lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(one.rhs == doctest::Approx(lhs).epsilon(1e-12));

  struct Case {
    double c;
    int d;
    std::vector<double> f;
  };
  const std::vector<Case> grid = {{2.5, 2, {0.5, 1.0, 3.0}},
                                  {4.0, 3, {1.0, 1.5, 2.5, 4.0}},
                                  {7.3, 3, {0.8, 1.9, 2.6, 5.0}},
                                  {5.5, 4, {1.0, 1.3, 1.7, 2.2, 3.0}},
                                  {0.7, 1, {1.0, 3.0}}};
  for (const Case& cs : grid) {
    const CpReport r = verify_cp(cs.c, cs.d, cs.f, 200000, rng);
    CAPTURE(cs.c);
    CHECK_FALSE(r.monte_carlo);
    CHECK(r.relative_error < 1e-8);
  }
}
