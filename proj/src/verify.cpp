#include "simplex_lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "simplex_lab/chain.hpp"
#include "simplex_lab/continuous_c.hpp"
#include "simplex_lab/process.hpp"
#include "simplex_lab/samplers.hpp"
#include "simplex_lab/transforms.hpp"

namespace simplex_lab {

namespace {

TestReport exact(bool pass, double statistic = 0.0) {
  return {statistic, pass ? 1.0 : 0.0, pass, 0};
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v[i]);
    s += (i ? "," : "") + std::string(buf);
  }
  return s;
}

double relative_gap(double x, double y) {
  return std::abs(x - y) / std::max(std::abs(x), std::abs(y));
}

void core_suite(std::vector<NamedReport>& out) {
  const std::vector<std::vector<double>> as = {{0.3, 1.7, 2.0}, {1.0, 1.0}, {0.5, 0.5, 0.5, 0.5}};
  for (const auto& a : as) {
    const DirichletParams params(a);
    for (int k = 1; k <= 6; ++k) {
      double sum = 0.0;
      for_each_composition(static_cast<int>(a.size()), k, [&](const std::vector<int>& b) {
        sum += composition_weight({b, k}, params);
      });
      const double err = std::abs(sum - 1.0);
      out.push_back({"composition_weights_sum a=" + std::to_string(a.size()) + "d k=" +
                         std::to_string(k),
                     exact(err < 1e-12, err)});
      const double face_sum = face_weights(k, params).sum();
      out.push_back({"face_weights_sum a=" + std::to_string(a.size()) + "d k=" + std::to_string(k),
                     exact(std::abs(face_sum - 1.0) < 1e-12, std::abs(face_sum - 1.0))});
    }
  }

  RngStream rng(7, 0);
  double worst = 0.0;
  for (int d = 1; d <= 3; ++d) {
    std::vector<double> a(static_cast<std::size_t>(d + 1));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = 0.5 + static_cast<double>(i);
    const DirichletParams params(a);
    for (int k = 1; k <= 6; ++k) {
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> f(a.size());
        for (double& v : f) v = 0.5 + 1.5 * rng.uniform();
        worst = std::max(worst, relative_gap(tc_quasi_bernoulli(params, f, k, QbMethod::compositions),
                                             tc_quasi_bernoulli(params, f, k, QbMethod::partitions)));
      }
    }
  }
  out.push_back({"compositions_vs_partitions", exact(worst < 1e-10, worst)});

  const std::vector<double> f3 = {1.0, 2.0, 3.0};
  for (int k = 1; k <= 2; ++k) {
    const DiffReport diff = verify_diff_relation(DirichletParams({1.0, 2.0, 3.0}), k, f3, 1e-4);
    out.push_back({"diff_relation k=" + std::to_string(k),
                   exact(diff.relative_error < 1e-5, diff.relative_error)});
  }

  for (int c = 1; c <= 3; ++c) {
    const NuSpec nu = nu_weights(c, 2);
    double sum = 0.0;
    for (double w : nu.dim_weights) sum += w;
    out.push_back({"nu_weights_sum c=" + std::to_string(c),
                   exact(std::abs(sum - 1.0) < 1e-12, std::abs(sum - 1.0))});
  }
  RngStream cp_rng(11, 0);
  const CpReport cp = verify_cp(3.5, 2, f3, 200000, cp_rng);
  out.push_back({"nu_transform_identity c=3.5 d=2", exact(cp.pass, cp.relative_error)});
  out.push_back({"exists_probability", exact(!exists_probability(0.5, 1) && exists_probability(2.5, 2))});
}

void transforms_suite(std::vector<NamedReport>& out, std::uint64_t seed, std::size_t n) {
  struct Case {
    std::vector<double> a;
    int k;
  };
  const std::vector<Case> cases = {{{1.0, 1.0}, 1}, {{1.0, 2.0, 3.0}, 2}, {{0.5, 0.5, 0.5}, 3}};
  std::uint64_t stream = 0;
  for (const Case& c : cases) {
    std::vector<double> f;
    for (std::size_t i = 0; i < c.a.size(); ++i) f.push_back(1.0 + static_cast<double>(i));
    const RatioReport r =
        verify_ratio_identity(DirichletParams(c.a), c.k, f, n ? n : 1000000, RngStream(seed, stream++));
    out.push_back({"ratio_identity d=" + std::to_string(c.a.size() - 1) + " k=" + std::to_string(c.k),
                   r.test});
  }

  const DirichletParams params({1.0, 2.0, 3.0});
  const std::size_t m = n ? n : 100000;
  const PointCloud cloud = draw_points(m, 3, RngStream(seed, stream++), [&](RngStream& g) {
    return sample_quasi_bernoulli({params, 2, QbRoute::mixture}, g);
  });
  for (int i = 0; i < 3; ++i) {
    RunningMoments hits;
    for (std::size_t s = 0; s < cloud.size(); ++s) hits.add(cloud[s][static_cast<std::size_t>(i)] == 1.0);
    out.push_back({"vertex_mass i=" + std::to_string(i),
                   se_band_test(hits.mean(), hits.std_error(), vertex_mass(params, 2, i), 4.0, m)});
  }
  RunningMoments zero;
  for (std::size_t s = 0; s < cloud.size(); ++s) zero.add(cloud[s][0] == 0.0);
  const int zero_set[] = {0};
  out.push_back({"face_mass B0=0",
                 se_band_test(zero.mean(), zero.std_error(), face_mass(params, 2, zero_set), 4.0, m)});
  out.push_back({"face_weights_chi_square", chi_square_face_test(cloud, face_weights(2, params))});

  const PointCloud mixture = draw_points(m, 3, RngStream(seed, stream++), [&](RngStream& g) {
    return sample_quasi_bernoulli({params, 3, QbRoute::mixture}, g);
  });
  const PointCloud ewens = draw_points(m, 3, RngStream(seed, stream++), [&](RngStream& g) {
    return sample_quasi_bernoulli({params, 3, QbRoute::ewens}, g);
  });
  out.push_back({"routes_face_chi_square", chi_square_two_sample_face_test(mixture, ewens)});
  auto interior = [](const PointCloud& c) {
    PointCloud in(c.dim());
    for (std::size_t s = 0; s < c.size(); ++s)
      if (support_of(c[s]).size() == static_cast<int>(c.dim())) in.push_back(c[s]);
    return in;
  };
  RngStream perm(seed, stream++);
  out.push_back({"routes_interior_energy", energy_two_sample_test(interior(mixture), interior(ewens), 199, perm)});
}

void chain_suite(std::vector<NamedReport>& out, std::uint64_t seed, std::size_t n) {
  const DirichletParams params({1.0, 2.0, 3.0});
  const std::size_t m = n ? n : 200000;
  std::uint64_t stream = 100;
  for (QbRoute route : {QbRoute::mixture, QbRoute::ewens}) {
    for (int k = 1; k <= 3; ++k) {
      const PointCloud z = draw_points(m, 3, RngStream(seed, stream++), [&](RngStream& g) {
        const SimplexPoint x = sample_dirichlet(params, g);
        const double y = sample_beta(k, params.total(), g);
        return affine_update(x, y, sample_quasi_bernoulli({params, k, route}, g));
      });
      const std::string prefix =
          "perpetuity " + std::string(to_string(route)) + " k=" + std::to_string(k) + " ";
      for (auto& r : moment_checks(z, params, 3, 4.0, prefix)) out.push_back(std::move(r));
    }
  }

  const PointCloud series = draw_points(m, 3, RngStream(seed, stream++), [&](RngStream& g) {
    return backward_series_sample(params, 2, 1e-12, g).point;
  });
  for (auto& r : moment_checks(series, params, 3, 4.0, "backward_series ")) out.push_back(std::move(r));

  // Independent chains keyed by stream id; thinning keeps consecutive
  // emissions close to uncorrelated so 5 SE bands stay meaningful.
  constexpr std::size_t kChains = 64;
  const std::size_t per_chain = (m + kChains - 1) / kChains;
  PointCloud forward(3);
  forward.reserve(per_chain * kChains);
  const RngStream chain_base(seed, stream++);
  for (std::size_t c = 0; c < kChains; ++c) {
    RngStream g = chain_base.substream(c);
    const ChainConfig config{params, 2, 200, 10, barycenter(3), QbRoute::mixture};
    run_chain(config, per_chain, g, [&](const SimplexPoint& x) { forward.push_back(x); });
  }
  for (auto& r : moment_checks(forward, params, 3, 5.0, "forward_chain ")) out.push_back(std::move(r));
}

void process_suite(std::vector<NamedReport>& out, std::uint64_t seed, std::size_t n) {
  const BaseMeasure measure(2.0, UniformBase{});
  const std::vector<double> edges = {0.0, 0.3, 1.0};
  const std::vector<std::vector<double>> fs = {{1.0, 2.0}, {2.0, 1.0}, {1.0, 5.0}};
  const PberReport r = verify_pber(2, measure, edges, n ? n : 100000, RngStream(seed, 200), fs);
  out.push_back({"process_face_chi_square", r.face_test});
  for (const auto& t : r.transforms)
    out.push_back({"process_transform f=(" + join(t.f) + ")", t.test});
}

}  // namespace

std::vector<NamedReport> moment_checks(const PointCloud& samples, const DirichletParams& params,
                                       int max_order, double band, const std::string& prefix) {
  std::vector<NamedReport> out;
  for (const MomentIndex& idx : moment_indices(params.size(), max_order)) {
    const McEstimate est = empirical_moment(samples, idx);
    out.push_back({prefix + idx.to_string(),
                   se_band_test(est.estimate, est.std_error, dirichlet_moment_oracle(params, idx), band,
                                est.n)});
  }
  return out;
}

std::vector<NamedReport> run_suite(std::string_view suite, std::uint64_t seed, std::size_t n) {
  std::vector<NamedReport> out;
  const bool all = suite == "all";
  if (!all && suite != "core" && suite != "transforms" && suite != "chain" && suite != "process")
    throw std::invalid_argument("unknown suite: " + std::string(suite));
  if (all || suite == "core") core_suite(out);
  if (all || suite == "transforms") transforms_suite(out, seed, n);
  if (all || suite == "chain") chain_suite(out, seed, n);
  if (all || suite == "process") process_suite(out, seed, n);
  return out;
}

bool all_pass(const std::vector<NamedReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const NamedReport& r) { return r.report.pass; });
}

void write_reports(std::ostream& out, const std::vector<NamedReport>& reports) {
  for (const auto& r : reports)
    out << (r.report.pass ? "PASS " : "FAIL ") << r.name << ' ' << to_json(r.report) << '\n';
}

}  // namespace simplex_lab
