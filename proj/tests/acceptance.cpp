// Acceptance run: one PASS/FAIL line per criterion. Closed-form targets are
// recomputed here from first principles rather than taken from the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "simplex_lab/chain.hpp"
#include "simplex_lab/continuous_c.hpp"
#include "simplex_lab/process.hpp"
#include "simplex_lab/samplers.hpp"
#include "simplex_lab/stats.hpp"
#include "simplex_lab/transforms.hpp"

using namespace simplex_lab;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double rising(double x, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= x + i;
  return p;
}

double moment_oracle(const std::vector<double>& a, const std::vector<int>& n) {
  double total = 0.0;
  int order = 0;
  double num = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += a[i];
    order += n[i];
    num *= rising(a[i], n[i]);
  }
  return num / rising(total, order);
}

// Every multi-index with 1 <= order <= 3 over three coordinates.
std::vector<std::vector<int>> indices3() {
  std::vector<std::vector<int>> out;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j)
      for (int l = 0; i + j + l <= 3; ++l)
        if (i + j + l > 0) out.push_back({i, j, l});
  return out;
}

// Worst SE distance over all moments of order <= 3.
double worst_moment_z(const PointCloud& cloud, const std::vector<double>& a) {
  double worst = 0.0;
  for (const auto& n : indices3()) {
    RunningMoments m;
    for (std::size_t s = 0; s < cloud.size(); ++s) {
      double v = 1.0;
      for (std::size_t i = 0; i < 3; ++i) v *= std::pow(cloud[s][i], n[i]);
      m.add(v);
    }
    worst = std::max(worst, std::abs(m.mean() - moment_oracle(a, n)) / m.std_error());
  }
  return worst;
}

// T_k(B)(f) by brute-force recursion over compositions.
double qb_transform_oracle(const std::vector<double>& a, const std::vector<double>& f, int k) {
  double total = 0.0;
  std::function<void(std::size_t, int, double)> rec = [&](std::size_t i, int left, double term) {
    if (i + 1 == a.size()) {
      total += term * rising(a[i], left) / std::tgamma(left + 1.0) / std::pow(f[i], left);
      return;
    }
    for (int b = 0; b <= left; ++b)
      rec(i + 1, left - b, term * rising(a[i], b) / std::tgamma(b + 1.0) / std::pow(f[i], b));
  };
  rec(0, k, 1.0);
  double asum = 0.0;
  for (double v : a) asum += v;
  return total * std::tgamma(k + 1.0) / rising(asum, k);
}

double inner(const std::vector<double>& f, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * x[i];
  return s;
}

char buf[512];

Outcome criterion1() {
  double worst = 0.0;
  for (const auto& a : std::vector<std::vector<double>>{{0.3, 1.7, 2.0}, {1.0, 1.0}, {0.5, 0.5, 0.5, 0.5}}) {
    const DirichletParams p(a);
    for (int k = 1; k <= 6; ++k) {
      double sum = 0.0;
      for_each_composition(static_cast<int>(a.size()), k, [&](const std::vector<int>& b) {
        sum += composition_weight({b, k}, p);
      });
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  std::snprintf(buf, sizeof buf, "max |sum - 1| = %.3g", worst);
  return {worst < 1e-12, buf};
}

Outcome criterion2() {
  RngStream rng(kSeed, 2);
  double worst = 0.0;
  int evaluations = 0;
  for (int d = 1; d <= 3; ++d) {
    std::vector<double> a(static_cast<std::size_t>(d + 1));
    for (double& v : a) v = 0.2 + 2.8 * rng.uniform();
    const DirichletParams p(a);
    std::vector<std::vector<double>> fs(20, std::vector<double>(a.size()));
    for (auto& f : fs)
      for (double& v : f) v = 0.5 + 1.5 * rng.uniform();
    for (int k = 1; k <= 6; ++k) {
      for (const auto& f : fs) {
        const double comp = tc_quasi_bernoulli(p, f, k, QbMethod::compositions);
        const double part = tc_quasi_bernoulli(p, f, k, QbMethod::partitions);
        worst = std::max(worst, std::abs(comp - part) / std::abs(part));
        worst = std::max(worst, std::abs(comp - qb_transform_oracle(a, f, k)) / std::abs(comp));
        ++evaluations;
      }
    }
  }
  std::snprintf(buf, sizeof buf, "%d evaluations, max relative gap = %.3g", evaluations, worst);
  return {worst < 1e-10, buf};
}

Outcome criterion3() {
  struct Case {
    std::vector<double> a;
    int k;
  };
  const std::vector<Case> cases = {{{1.0, 1.0}, 1}, {{1.0, 2.0, 3.0}, 2}, {{0.5, 0.5, 0.5}, 3}};
  Outcome out;
  std::uint64_t stream = 30;
  for (const Case& c : cases) {
    std::vector<double> f;
    for (std::size_t i = 0; i < c.a.size(); ++i) f.push_back(1.0 + static_cast<double>(i));
    double asum = 0.0, ta = 1.0;
    for (std::size_t i = 0; i < c.a.size(); ++i) {
      asum += c.a[i];
      ta *= std::pow(f[i], -c.a[i]);
    }
    const double target = ta * qb_transform_oracle(c.a, f, c.k);
    const DirichletParams p(c.a);
    const PointCloud xs = draw_points(1000000, c.a.size(), RngStream(kSeed, stream++),
                                      [&](RngStream& g) { return sample_dirichlet(p, g); });
    RunningMoments m;
    for (std::size_t s = 0; s < xs.size(); ++s) m.add(std::pow(inner(f, xs[s]), -(asum + c.k)));
    const double z = std::abs(m.mean() - target) / m.std_error();
    out.pass = out.pass && z <= 3.0;
    std::snprintf(buf, sizeof buf, "%sd=%zu k=%d z=%.2f", out.detail.empty() ? "" : "; ", c.a.size() - 1, c.k, z);
    out.detail += buf;
  }
  return out;
}

Outcome criterion4() {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const DirichletParams p(a);
  Outcome out;
  double worst = 0.0;
  std::uint64_t stream = 40;
  for (QbRoute route : {QbRoute::mixture, QbRoute::ewens}) {
    for (int k = 1; k <= 3; ++k) {
      const PointCloud z = draw_points(200000, 3, RngStream(kSeed, stream++), [&](RngStream& g) {
        const SimplexPoint x = sample_dirichlet(p, g);
        const double y = sample_beta(k, 6.0, g);
        const SimplexPoint b = sample_quasi_bernoulli({p, k, route}, g);
        SimplexPoint out_point{std::vector<double>(3)};
        for (std::size_t i = 0; i < 3; ++i) out_point[i] = (1.0 - y) * x[i] + y * b[i];
        return out_point;
      });
      worst = std::max(worst, worst_moment_z(z, a));
    }
  }
  std::snprintf(buf, sizeof buf, "6 runs x 19 moments, worst z = %.2f", worst);
  return {worst <= 4.0, buf};
}

Outcome criterion5() {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const DirichletParams p(a);
  const double c = 2.0, total = 6.0;
  auto ratio = [&](double part) {
    return std::exp(std::lgamma(total) + std::lgamma(part + c) - std::lgamma(total + c) - std::lgamma(part));
  };
  double worst = 0.0;
  std::uint64_t stream = 50;
  for (QbRoute route : {QbRoute::mixture, QbRoute::ewens}) {
    const PointCloud bs = draw_points(100000, 3, RngStream(kSeed, stream++), [&](RngStream& g) {
      return sample_quasi_bernoulli({p, 2, route}, g);
    });
    for (std::size_t i = 0; i < 3; ++i) {
      RunningMoments hit;
      for (std::size_t s = 0; s < bs.size(); ++s) hit.add(bs[s][i] == 1.0);
      worst = std::max(worst, std::abs(hit.mean() - ratio(a[i])) / hit.std_error());
    }
    RunningMoments zero;
    for (std::size_t s = 0; s < bs.size(); ++s) zero.add(bs[s][0] == 0.0);
    worst = std::max(worst, std::abs(zero.mean() - ratio(a[1] + a[2])) / zero.std_error());
  }
  std::snprintf(buf, sizeof buf, "both routes, worst z = %.2f", worst);
  return {worst <= 4.0, buf};
}

Outcome criterion6() {
  const DirichletParams p({1.0, 2.0, 3.0});
  const PointCloud xs = draw_points(100000, 3, RngStream(kSeed, 60), [&](RngStream& g) {
    return sample_quasi_bernoulli({p, 3, QbRoute::mixture}, g);
  });
  const PointCloud ys = draw_points(100000, 3, RngStream(kSeed, 61), [&](RngStream& g) {
    return sample_quasi_bernoulli({p, 3, QbRoute::ewens}, g);
  });
  const TestReport chi = chi_square_two_sample_face_test(xs, ys);
  auto interior = [](const PointCloud& c) {
    PointCloud out(3);
    for (std::size_t s = 0; s < c.size(); ++s)
      if (c[s][0] > 0.0 && c[s][1] > 0.0 && c[s][2] > 0.0) out.push_back(c[s]);
    return out;
  };
  const PointCloud ix = interior(xs);
  const PointCloud iy = interior(ys);
  RngStream rng(kSeed, 62);
  const TestReport energy = energy_two_sample_test(ix, iy, 199, rng);
  std::snprintf(buf, sizeof buf, "chi-square p = %.4g; interior energy p = %.4g (interior sizes %zu, %zu)",
                chi.p_value, energy.p_value, ix.size(), iy.size());
  return {chi.p_value > 0.001 && energy.p_value > 0.01, buf};
}

Outcome criterion7() {
  Outcome out;
  double worst = 0.0;
  for (double c : {1.0, 2.0, 3.0}) {
    const NuSpec nu = nu_weights(c, 2);
    const double z = (c + 1.0) * (c + 2.0);
    worst = std::max({worst, std::abs(nu.dim_weights[0] - 3.0 * 2.0 / z),
                      std::abs(nu.dim_weights[1] - 3.0 * 2.0 * (c - 1.0) / z),
                      std::abs(nu.dim_weights[2] - (c - 1.0) * (c - 2.0) / z)});
  }
  RngStream rng(kSeed, 70);
  const std::vector<double> f = {1.0, 2.0, 3.0};
  const CpReport cp = verify_cp(3.5, 2, f, 200000, rng);
  const bool exist = !exists_probability(0.5, 1) && exists_probability(2.5, 2);
  out.pass = worst < 1e-15 && !cp.monte_carlo && cp.relative_error < 1e-8 && exist;
  std::snprintf(buf, sizeof buf, "display max error = %.3g; nu transform identity relative error = %.3g; existence checks %s", worst,
                cp.relative_error, exist ? "ok" : "wrong");
  out.detail = buf;
  return out;
}

Outcome criterion8() {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const DirichletParams p(a);
  std::vector<std::vector<double>> diff(3), se(3);
  std::uint64_t stream = 80;
  for (int k : {2, 4, 8, 16}) {
    const PointCloud bs = draw_points(100000, 3, RngStream(kSeed, stream++), [&](RngStream& g) {
      return sample_quasi_bernoulli({p, k, QbRoute::mixture}, g);
    });
    for (std::size_t i = 0; i < 3; ++i) {
      RunningMoments m;
      for (std::size_t s = 0; s < bs.size(); ++s) m.add(bs[s][i] * bs[s][i]);
      std::vector<int> n(3, 0);
      n[i] = 2;
      diff[i].push_back(std::abs(m.mean() - moment_oracle(a, n)));
      se[i].push_back(m.std_error());
    }
  }
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t t = 1; t < diff[i].size(); ++t)
      pass = pass && diff[i][t] <= diff[i][t - 1] + 2.0 * std::hypot(se[i][t], se[i][t - 1]);
    std::snprintf(buf, sizeof buf, "%si=%zu: %.2e %.2e %.2e %.2e", i ? "; " : "", i, diff[i][0], diff[i][1],
                  diff[i][2], diff[i][3]);
    detail += buf;
  }
  return {pass, detail};
}

Outcome criterion9() {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const DirichletParams p(a);
  const PointCloud series = draw_points(200000, 3, RngStream(kSeed, 90), [&](RngStream& g) {
    return backward_series_sample(p, 2, 1e-12, g).point;
  });
  const double z_series = worst_moment_z(series, a);

  // 64 independent chains after burn-in 200, thinned by 10.
  PointCloud forward(3);
  const RngStream base(kSeed, 91);
  for (std::uint64_t c = 0; c < 64; ++c) {
    RngStream g = base.substream(c);
    const ChainConfig config{p, 2, 200, 10, barycenter(3), QbRoute::mixture};
    run_chain(config, 3125, g, [&](const SimplexPoint& x) { forward.push_back(x); });
  }
  const double z_chain = worst_moment_z(forward, a);
  std::snprintf(buf, sizeof buf, "backward series worst z = %.2f (<= 4); forward chain worst z = %.2f (<= 5)",
                z_series, z_chain);
  return {z_series <= 4.0 && z_chain <= 5.0, buf};
}

Outcome criterion10() {
  const BaseMeasure measure(2.0, UniformBase{});
  const std::vector<double> edges = {0.0, 0.3, 1.0};
  const std::vector<std::vector<double>> fs = {{1.0, 2.0}, {2.0, 1.0}, {1.0, 5.0}};
  const PberReport r = verify_pber(2, measure, edges, 100000, RngStream(kSeed, 100), fs);
  Outcome out;
  out.pass = std::abs(r.target[0] - 0.6) < 1e-12 && std::abs(r.target[1] - 1.4) < 1e-12;
  for (const auto& t : r.transforms) {
    const double s1 = 0.6 / t.f[0] + 1.4 / t.f[1];
    const double s2 = 0.6 / (t.f[0] * t.f[0]) + 1.4 / (t.f[1] * t.f[1]);
    const double target = (s1 * s1 + s2) / (2.0 * 3.0);
    const double z = std::abs(t.mc.estimate - target) / t.mc.std_error;
    out.pass = out.pass && z <= 4.0;
    std::snprintf(buf, sizeof buf, "%sf=(%g,%g) z=%.2f", out.detail.empty() ? "" : "; ", t.f[0], t.f[1], z);
    out.detail += buf;
  }
  std::snprintf(buf, sizeof buf, "; face chi-square p = %.4g", r.face_test.p_value);
  out.detail += buf;
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 when no runtime bound is stated
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "composition weights sum to one", 1.0, criterion1},
      {2, "compositions and partitions agree", 5.0, criterion2},
      {3, "ratio identity against Monte Carlo", 30.0, criterion3},
      {4, "perpetuity moments", 60.0, criterion4},
      {5, "face masses", 0.0, criterion5},
      {6, "mixture and Ewens routes agree", 0.0, criterion6},
      {7, "continuous-parameter measure", 0.0, criterion7},
      {8, "second moments approach the Dirichlet law", 0.0, criterion8},
      {9, "chain stationarity", 120.0, criterion9},
      {10, "binned process law", 0.0, criterion10},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && seconds >= c.limit_seconds) {
      o.pass = false;
      o.detail += "; over time limit";
    }
    std::printf("%s criterion %2d: %s [%.2fs] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
