#include "simplex_lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "simplex_lab/io.hpp"
#include "simplex_lab/parallel.hpp"
#include "simplex_lab/samplers.hpp"

namespace simplex_lab {

void RunningMoments::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double n1 = static_cast<double>(n_);
  const double n2 = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double total = n1 + n2;
  mean_ += delta * n2 / total;
  m2_ += other.m2_ + delta * delta * n1 * n2 / total;
  n_ += other.n_;
}

double RunningMoments::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double RunningMoments::std_error() const {
  return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

McEstimate monte_carlo_mean(std::size_t n, const RngStream& base,
                            const std::function<double(RngStream&)>& draw) {
  if (n == 0) throw std::invalid_argument("Monte Carlo mean needs n >= 1");
  const std::size_t chunks = (n + kBatchChunk - 1) / kBatchChunk;
  std::vector<RunningMoments> parts(chunks);
  parallel_for(chunks, [&](std::size_t j) {
    RngStream rng = base.substream(j);
    const std::size_t count = std::min(kBatchChunk, n - j * kBatchChunk);
    for (std::size_t i = 0; i < count; ++i) parts[j].add(draw(rng));
  });
  RunningMoments total;
  for (const auto& p : parts) total.merge(p);
  return {total.mean(), total.std_error(), total.count()};
}

MomentIndex MomentIndex::of(std::vector<int> n) {
  for (int v : n)
    if (v < 0) throw std::invalid_argument("moment exponents must be nonnegative");
  const int order = std::accumulate(n.begin(), n.end(), 0);
  return MomentIndex{std::move(n), order};
}

std::string MomentIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s + ")";
}

std::vector<MomentIndex> moment_indices(std::size_t dim, int max_order) {
  std::vector<MomentIndex> out;
  for (int order = 1; order <= max_order; ++order)
    for_each_composition(static_cast<int>(dim), order,
                         [&](const std::vector<int>& b) { out.push_back(MomentIndex::of(b)); });
  return out;
}

double dirichlet_moment_oracle(const DirichletParams& params, const MomentIndex& idx) {
  if (idx.n.size() != params.size())
    throw std::invalid_argument("moment index and parameters differ in length");
  double v = 1.0 / pochhammer(params.total(), idx.order);
  for (std::size_t i = 0; i < params.size(); ++i) v *= pochhammer(params[i], idx.n[i]);
  return v;
}

McEstimate empirical_moment(const PointCloud& samples, const MomentIndex& idx) {
  if (samples.empty()) throw std::invalid_argument("empirical moment of an empty sample");
  if (samples.dim() != idx.n.size()) throw std::invalid_argument("moment index dimension mismatch");
  RunningMoments acc;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto x = samples[s];
    double v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (int p = 0; p < idx.n[i]; ++p) v *= x[i];
    acc.add(v);
  }
  return {acc.mean(), acc.std_error(), acc.count()};
}

std::string to_json(const TestReport& r) {
  return "{\"statistic\":" + format_json_number(r.statistic) +
         ",\"p_value\":" + format_json_number(r.p_value) +
         ",\"pass\":" + (r.pass ? "true" : "false") + ",\"n_used\":" + std::to_string(r.n_used) + "}";
}

TestReport se_band_test(double estimate, double std_error, double target, double band,
                        std::size_t n) {
  const double diff = std::abs(estimate - target);
  // Agreement at rounding level passes even when the standard error is
  // itself pure rounding noise.
  double z;
  if (diff <= 1e-12 * std::max(1.0, std::abs(target))) {
    z = 0.0;
  } else if (std_error > 0.0) {
    z = diff / std_error;
  } else {
    z = std::numeric_limits<double>::infinity();
  }
  return {z, std::erfc(z / std::sqrt(2.0)), z <= band, n};
}

namespace {

double distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Lower-triangular pairwise distances of the pooled sample.
struct PooledDistances {
  std::size_t n;
  std::vector<double> tri;

  PooledDistances(const PointCloud& xs, std::size_t nx, const PointCloud& ys, std::size_t ny)
      : n(nx + ny), tri(n * (n - 1) / 2) {
    auto row = [&](std::size_t i) { return i < nx ? xs[i] : ys[i - nx]; };
    std::size_t pos = 0;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) tri[pos++] = distance(row(i), row(j));
  }

  // Energy statistic for the split given by `in_x` (true = first sample).
  double statistic(const std::vector<char>& in_x, std::size_t nx, double total) const {
    double sxx = 0.0;
    double syy = 0.0;
    std::size_t pos = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const char li = in_x[i];
      for (std::size_t j = 0; j < i; ++j, ++pos) {
        if (li != in_x[j]) continue;
        (li ? sxx : syy) += tri[pos];
      }
    }
    const double sxy = total - sxx - syy;
    const double a = static_cast<double>(nx);
    const double b = static_cast<double>(n - nx);
    const double e = 2.0 * sxy / (a * b) - 2.0 * sxx / (a * a) - 2.0 * syy / (b * b);
    return a * b / (a + b) * e;
  }
};

}  // namespace

double energy_statistic(const PointCloud& xs, const PointCloud& ys) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("energy statistic needs nonempty samples");
  PooledDistances pooled(xs, xs.size(), ys, ys.size());
  std::vector<char> in_x(pooled.n, 0);
  std::fill(in_x.begin(), in_x.begin() + static_cast<std::ptrdiff_t>(xs.size()), 1);
  const double total = std::accumulate(pooled.tri.begin(), pooled.tri.end(), 0.0);
  return pooled.statistic(in_x, xs.size(), total);
}

TestReport energy_two_sample_test(const PointCloud& xs, const PointCloud& ys,
                                  std::size_t permutations, RngStream& rng, double alpha,
                                  std::size_t max_points) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("energy test needs nonempty samples");
  if (xs.dim() != ys.dim()) throw std::invalid_argument("energy test samples differ in dimension");
  const std::size_t nx = std::min(xs.size(), max_points);
  const std::size_t ny = std::min(ys.size(), max_points);
  const PooledDistances pooled(xs, nx, ys, ny);
  const double total = std::accumulate(pooled.tri.begin(), pooled.tri.end(), 0.0);

  std::vector<char> labels(pooled.n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(nx), 1);
  const double observed = pooled.statistic(labels, nx, total);

  // Each permutation draws from its own substream so the count is the same
  // for any worker count.
  std::vector<char> exceeds(permutations, 0);
  const RngStream base = rng.substream(rng.next_u64());
  const double tol = 1e-10 * total / static_cast<double>(std::max<std::size_t>(1, pooled.tri.size()));
  parallel_for(permutations, [&](std::size_t p) {
    RngStream prng = base.substream(p);
    std::vector<char> perm(labels);
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[prng.below(i + 1)]);
    // Ties count as exceedances; tol absorbs summation-order noise.
    exceeds[p] = pooled.statistic(perm, nx, total) >= observed - tol ? 1 : 0;
  });
  const double count = std::accumulate(exceeds.begin(), exceeds.end(), 0.0);
  const double p_value = (1.0 + count) / (1.0 + static_cast<double>(permutations));
  return {observed, p_value, p_value > alpha, nx + ny};
}

double chi_square_survival(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (!std::isfinite(statistic)) return 0.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

TestReport chi_square_face_test(const PointCloud& samples, const FaceMasses& expected,
                                double alpha) {
  if (samples.empty()) throw std::invalid_argument("chi-square test of an empty sample");
  if (samples.dim() != expected.dim()) throw std::invalid_argument("face test dimension mismatch");
  const double mass = expected.sum();
  if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("expected face masses must sum to 1");

  std::vector<double> observed(expected.raw().size(), 0.0);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const FaceSubset t = support_of(samples[s]);
    if (t.mask == 0) throw std::logic_error("sample lies on no face (all coordinates zero)");
    observed[t.mask] += 1.0;
  }

  const double n = static_cast<double>(samples.size());
  TestReport report;
  report.n_used = samples.size();
  for (std::uint32_t m = 1; m < observed.size(); ++m) {
    if (observed[m] > 0.0 && expected[FaceSubset{m}] <= 0.0) {
      report.statistic = std::numeric_limits<double>::infinity();
      report.p_value = 0.0;
      report.pass = false;
      return report;
    }
  }

  struct Cell {
    double obs;
    double exp;
  };
  std::vector<Cell> cells;
  Cell pooled{0.0, 0.0};
  for (std::uint32_t m = 1; m < observed.size(); ++m) {
    const double e = expected[FaceSubset{m}] * n;
    if (e <= 0.0) continue;
    if (e < 5.0) {
      pooled.obs += observed[m];
      pooled.exp += e;
    } else {
      cells.push_back({observed[m], e});
    }
  }
  if (pooled.exp > 0.0) {
    if (pooled.exp >= 5.0 || cells.empty()) {
      cells.push_back(pooled);
    } else {
      auto smallest = std::min_element(cells.begin(), cells.end(),
                                       [](const Cell& l, const Cell& r) { return l.exp < r.exp; });
      smallest->obs += pooled.obs;
      smallest->exp += pooled.exp;
    }
  }
  double stat = 0.0;
  for (const Cell& c : cells) stat += (c.obs - c.exp) * (c.obs - c.exp) / c.exp;
  report.statistic = stat;
  report.p_value = chi_square_survival(stat, static_cast<double>(cells.size()) - 1.0);
  report.pass = report.p_value > alpha;
  return report;
}

TestReport chi_square_two_sample_face_test(const PointCloud& xs, const PointCloud& ys, double alpha) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("chi-square test of an empty sample");
  if (xs.dim() != ys.dim()) throw std::invalid_argument("face test dimension mismatch");
  if (xs.dim() > kMaxSubsetDim) throw std::invalid_argument("face test supports at most 21 coordinates");
  const std::size_t faces = std::size_t{1} << xs.dim();
  auto count = [&](const PointCloud& cloud) {
    std::vector<double> c(faces, 0.0);
    for (std::size_t s = 0; s < cloud.size(); ++s) {
      const FaceSubset t = support_of(cloud[s]);
      if (t.mask == 0) throw std::logic_error("sample lies on no face (all coordinates zero)");
      c[t.mask] += 1.0;
    }
    return c;
  };
  const std::vector<double> cx = count(xs);
  const std::vector<double> cy = count(ys);
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());

  // Columns with fewer than 10 pooled observations are merged.
  struct Cell {
    double x;
    double y;
  };
  std::vector<Cell> cells;
  Cell pooled{0.0, 0.0};
  for (std::size_t m = 1; m < faces; ++m) {
    const double total = cx[m] + cy[m];
    if (total == 0.0) continue;
    if (total < 10.0) {
      pooled.x += cx[m];
      pooled.y += cy[m];
    } else {
      cells.push_back({cx[m], cy[m]});
    }
  }
  if (pooled.x + pooled.y > 0.0) {
    if (pooled.x + pooled.y >= 10.0 || cells.empty()) {
      cells.push_back(pooled);
    } else {
      auto smallest = std::min_element(cells.begin(), cells.end(), [](const Cell& l, const Cell& r) {
        return l.x + l.y < r.x + r.y;
      });
      smallest->x += pooled.x;
      smallest->y += pooled.y;
    }
  }

  TestReport report;
  report.n_used = xs.size() + ys.size();
  if (cells.size() < 2) {
    report.pass = true;
    return report;
  }
  const double n = nx + ny;
  double stat = 0.0;
  for (const Cell& c : cells) {
    const double col = c.x + c.y;
    const double ex = nx * col / n;
    const double ey = ny * col / n;
    stat += (c.x - ex) * (c.x - ex) / ex + (c.y - ey) * (c.y - ey) / ey;
  }
  report.statistic = stat;
  report.p_value = chi_square_survival(stat, static_cast<double>(cells.size()) - 1.0);
  report.pass = report.p_value > alpha;
  return report;
}

}  // namespace simplex_lab
