#include "simplex_lab/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "simplex_lab/samplers.hpp"
#include "simplex_lab/transforms.hpp"

namespace simplex_lab {

namespace {

void validate_knots(const PiecewiseLinearCdf& cdf) {
  const auto& k = cdf.knots;
  if (k.size() < 2) throw std::invalid_argument("piecewise-linear CDF needs at least two knots");
  if (k.front().second != 0.0 || k.back().second != 1.0)
    throw std::invalid_argument("piecewise-linear CDF must run from F=0 to F=1");
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i].first < 0.0 || k[i].first > 1.0) throw std::invalid_argument("CDF knots must lie in [0,1]");
    if (i > 0 && (k[i].first < k[i - 1].first || k[i].second < k[i - 1].second))
      throw std::invalid_argument("CDF knots must be nondecreasing in x and F");
  }
}

double pl_cdf_left(const PiecewiseLinearCdf& cdf, double x) {
  const auto& k = cdf.knots;
  if (x <= k.front().first) return 0.0;
  if (x > k.back().first) return 1.0;
  // First knot with knot.x >= x.
  auto it = std::lower_bound(k.begin(), k.end(), x,
                             [](const auto& knot, double v) { return knot.first < v; });
  if (it->first == x) return it->second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.second + (hi.second - lo.second) * (x - lo.first) / (hi.first - lo.first);
}

double pl_inverse(const PiecewiseLinearCdf& cdf, double u) {
  const auto& k = cdf.knots;
  for (std::size_t j = 1; j < k.size(); ++j) {
    if (u <= k[j].second && u > k[j - 1].second) {
      if (k[j].first == k[j - 1].first) return k[j].first;
      return k[j - 1].first +
             (u - k[j - 1].second) / (k[j].second - k[j - 1].second) * (k[j].first - k[j - 1].first);
    }
  }
  return k.back().first;
}

void validate_edges(std::span<const double> edges) {
  if (edges.size() < 2) throw std::invalid_argument("bins need at least two edges");
  if (edges.front() != 0.0 || edges.back() != 1.0)
    throw std::invalid_argument("bin edges must start at 0 and end at 1");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("bin edges must be strictly increasing");
}

std::size_t bin_of(double location, std::span<const double> edges) {
  const auto it = std::upper_bound(edges.begin(), edges.end(), location);
  const std::size_t bins = edges.size() - 1;
  const std::size_t idx = static_cast<std::size_t>(it - edges.begin());
  return idx == 0 ? 0 : std::min(idx - 1, bins - 1);
}

}  // namespace

BaseMeasure::BaseMeasure(double total_mass, BaseDistribution base)
    : total_mass_(total_mass), base_(std::move(base)) {
  if (!(total_mass_ > 0.0) || !std::isfinite(total_mass_))
    throw std::invalid_argument("base measure needs positive total mass");
  if (const auto* b = std::get_if<BetaBase>(&base_)) {
    if (!(b->p > 0.0) || !(b->q > 0.0)) throw std::invalid_argument("beta base needs p, q > 0");
  } else if (const auto* pl = std::get_if<PiecewiseLinearCdf>(&base_)) {
    validate_knots(*pl);
  }
}

BaseMeasure BaseMeasure::parse(double total_mass, const std::string& spec) {
  if (spec == "uniform") return BaseMeasure(total_mass, UniformBase{});
  auto numbers = [](const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(std::stod(item));
    return out;
  };
  if (spec.rfind("beta:", 0) == 0) {
    const auto v = numbers(spec.substr(5), ',');
    if (v.size() != 2) throw std::invalid_argument("beta base expects beta:p,q");
    return BaseMeasure(total_mass, BetaBase{v[0], v[1]});
  }
  if (spec.rfind("pl:", 0) == 0) {
    PiecewiseLinearCdf cdf;
    std::stringstream ss(spec.substr(3));
    std::string knot;
    while (std::getline(ss, knot, ',')) {
      const auto v = numbers(knot, ':');
      if (v.size() != 2) throw std::invalid_argument("piecewise-linear knots expect x:F");
      cdf.knots.emplace_back(v[0], v[1]);
    }
    return BaseMeasure(total_mass, std::move(cdf));
  }
  throw std::invalid_argument("unknown base distribution: " + spec);
}

double BaseMeasure::cdf_left(double x) const {
  if (x <= 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  if (std::holds_alternative<UniformBase>(base_)) return x;
  if (const auto* b = std::get_if<BetaBase>(&base_)) return x >= 1.0 ? 1.0 : boost::math::ibeta(b->p, b->q, x);
  return pl_cdf_left(std::get<PiecewiseLinearCdf>(base_), x);
}

double BaseMeasure::mass(double lo, double hi) const {
  const double upper = hi >= 1.0 ? 1.0 : cdf_left(hi);
  return total_mass_ * (upper - cdf_left(lo));
}

double BaseMeasure::sample_location(RngStream& rng) const {
  if (std::holds_alternative<UniformBase>(base_)) return rng.uniform();
  if (const auto* b = std::get_if<BetaBase>(&base_)) return sample_beta(b->p, b->q, rng);
  return pl_inverse(std::get<PiecewiseLinearCdf>(base_), rng.uniform());
}

double AtomicProbability::total_weight() const {
  return std::accumulate(atoms.begin(), atoms.end(), 0.0,
                         [](double s, const Atom& a) { return s + a.weight; });
}

AtomicProbability sample_qb_process(int k, const BaseMeasure& measure, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("quasi-Bernoulli process needs k >= 1");
  const PartitionPortrait portrait = sample_crp_portrait(k, measure.total_mass(), rng);
  const std::vector<int> blocks = block_sizes(portrait);

  std::vector<Atom> atoms(blocks.size());
  for (auto& atom : atoms) atom.location = measure.sample_location(rng);
  const std::vector<double> shapes(blocks.begin(), blocks.end());
  std::vector<double> weights(blocks.size());
  sample_dirichlet_into(shapes, weights, rng);
  for (std::size_t t = 0; t < atoms.size(); ++t) atoms[t].weight = weights[t];

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.location < r.location; });
  AtomicProbability p;
  for (const Atom& atom : atoms) {
    if (!p.atoms.empty() && p.atoms.back().location == atom.location) {
      p.atoms.back().weight += atom.weight;
    } else {
      p.atoms.push_back(atom);
    }
  }
  return p;
}

SimplexPoint bin_probability(const AtomicProbability& p, std::span<const double> edges) {
  validate_edges(edges);
  SimplexPoint x{std::vector<double>(edges.size() - 1, 0.0)};
  for (const Atom& atom : p.atoms) x[bin_of(atom.location, edges)] += atom.weight;
  const double sum = std::accumulate(x.coords.begin(), x.coords.end(), 0.0);
  for (double& v : x.coords) v /= sum;
  return x;
}

DirichletParams bin_masses(const BaseMeasure& measure, std::span<const double> edges) {
  validate_edges(edges);
  std::vector<double> a(edges.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = measure.mass(edges[i], edges[i + 1]);
    if (!(a[i] > 0.0))
      throw std::invalid_argument("bin " + std::to_string(i) + " has zero base-measure mass");
  }
  return DirichletParams(std::move(a));
}

PberReport verify_pber(int k, const BaseMeasure& measure, std::span<const double> edges,
                       std::size_t n, const RngStream& rng,
                       const std::vector<std::vector<double>>& fs) {
  DirichletParams target = bin_masses(measure, edges);
  const std::vector<double> e(edges.begin(), edges.end());
  const PointCloud cloud = draw_points(n, target.size(), rng, [&](RngStream& g) {
    return bin_probability(sample_qb_process(k, measure, g), e);
  });

  PberReport report{target, chi_square_face_test(cloud, face_weights(k, target)), {}, false};
  report.pass = report.face_test.pass;
  for (const auto& f : fs) {
    TransformCheck check;
    check.f = f;
    check.closed_form = tc_quasi_bernoulli(target, f, k, QbMethod::partitions);
    check.mc = tc_monte_carlo(cloud, {f, static_cast<double>(k)});
    check.test = se_band_test(check.mc.estimate, check.mc.std_error, check.closed_form, 4.0, n);
    report.pass = report.pass && check.test.pass;
    report.transforms.push_back(std::move(check));
  }
  return report;
}

double tc_process(const PiecewiseConstant& f, int k, const BaseMeasure& measure) {
  validate_edges(f.edges);
  if (f.values.size() + 1 != f.edges.size())
    throw std::invalid_argument("piecewise-constant f needs one value per bin");
  for (double v : f.values)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("f must be strictly positive");
  std::vector<double> sigma(static_cast<std::size_t>(k), 0.0);
  for (std::size_t b = 0; b < f.values.size(); ++b) {
    const double m = measure.mass(f.edges[b], f.edges[b + 1]);
    double p = 1.0;
    for (int j = 0; j < k; ++j) {
      p /= f.values[b];
      sigma[static_cast<std::size_t>(j)] += m * p;
    }
  }
  return qb_transform_from_power_sums(sigma, measure.total_mass(), k);
}

}  // namespace simplex_lab
