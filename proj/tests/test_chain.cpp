#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "simplex_lab/chain.hpp"
#include "simplex_lab/stats.hpp"

using namespace simplex_lab;

namespace {

ChainConfig base_config() {
  return ChainConfig{DirichletParams({1.0, 2.0, 3.0}), 2, 200, 1, barycenter(3), QbRoute::mixture};
}

}  // namespace

TEST_CASE("affine update limits") {
  const SimplexPoint x{{0.2, 0.3, 0.5}};
  const SimplexPoint b{{0.0, 1.0, 0.0}};
  const SimplexPoint small = affine_update(x, 1e-12, b);
  for (std::size_t i = 0; i < 3; ++i) CHECK(small[i] == doctest::Approx(x[i]).epsilon(1e-11));
  CHECK(affine_update(x, 1.0, b).coords == b.coords);
}

TEST_CASE("config validation") {
  ChainConfig c = base_config();
  c.thin = 0;
  RngStream rng(1);
  CHECK_THROWS(run_chain(c, 1, rng));
  c = base_config();
  c.x0 = SimplexPoint{{0.5, 0.5}};
  CHECK_THROWS(run_chain(c, 1, rng));
  c = base_config();
  CHECK_THROWS(run_chain(c, 0, rng));
}

TEST_CASE("one step and reproducibility") {
  ChainConfig c = base_config();
  c.burn_in = 0;
  RngStream a(3), b(3);
  const PointCloud one = run_chain(c, 1, a);
  const SimplexPoint step = chain_step(c.x0, c, b);
  REQUIRE(one.size() == 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(one[0][i] == step[i]);

  RngStream r1(4), r2(4);
  const PointCloud s1 = run_chain(base_config(), 500, r1);
  const PointCloud s2 = run_chain(base_config(), 500, r2);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(is_valid(SimplexPoint{{s1[i][0], s1[i][1], s1[i][2]}}));
    for (std::size_t j = 0; j < 3; ++j) CHECK(s1[i][j] == s2[i][j]);
  }
}

TEST_CASE("long-run coordinate means") {
  ChainConfig c = base_config();
  c.thin = 10;
  RngStream rng(5);
  const PointCloud states = run_chain(c, 50000, rng);
  const double means[] = {1.0 / 6.0, 1.0 / 3.0, 0.5};
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<int> n(3, 0);
    n[i] = 1;
    const McEstimate m = empirical_moment(states, MomentIndex::of(n));
    CHECK(std::abs(m.estimate - means[i]) <= 5.0 * m.std_error);
  }
}

TEST_CASE("CSV trajectory") {
  ChainConfig c = base_config();
  RngStream rng(6);
  std::ostringstream out;
  write_chain_csv(out, c, 3, rng);
  const std::string s = out.str();
  CHECK(s.rfind("x0,x1,x2\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}

TEST_CASE("backward series") {
  const DirichletParams p({1.0, 2.0, 3.0});
  RngStream rng(7);
  for (int i = 0; i < 1000; ++i) {
    const SeriesDraw d = backward_series_sample(p, 2, 1e-12, rng);
    CHECK(d.residual < 1e-12);
    CHECK(is_valid(d.point));
  }
  CHECK_THROWS(backward_series_sample(p, 2, 0.0, rng));
  CHECK_THROWS(backward_series_sample(p, 2, 1.0, rng));

  // Residual after n terms is prod (1 - Y_j): replay the same stream by hand.
  RngStream a(8), b(8);
  const SeriesDraw d = backward_series_sample(p, 1, 0.3, a);
  double residual = 1.0;
  for (int t = 0; t < d.terms_used; ++t) {
    residual *= 1.0 - sample_beta(1, 6.0, b);
    sample_quasi_bernoulli({p, 1, QbRoute::mixture}, b);
  }
  CHECK(d.residual == residual);

  // E(terms) decreases with k since Y ~ beta(k, a) grows.
  double prev = 1e300;
  for (int k : {1, 2, 4, 8}) {
    RunningMoments terms;
    RngStream g(9, static_cast<std::uint64_t>(k));
    for (int i = 0; i < 4000; ++i) terms.add(backward_series_sample(p, k, 1e-6, g).terms_used);
    CHECK(terms.mean() < prev);
    prev = terms.mean();
  }

  // Arcsine case: d = 1, a = (1/2, 1/2), k = 1.
  const DirichletParams half({0.5, 0.5});
  const PointCloud arc = draw_points(100000, 2, RngStream(10), [&](RngStream& g) {
    return backward_series_sample(half, 1, 1e-12, g).point;
  });
  for (const MomentIndex& idx : moment_indices(2, 4)) {
    const McEstimate m = empirical_moment(arc, idx);
    CHECK(std::abs(m.estimate - dirichlet_moment_oracle(half, idx)) <= 4.0 * m.std_error);
  }
}
