#include "simplex_lab/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace simplex_lab {

bool is_valid(const SimplexPoint& x, double tol) {
  if (x.coords.empty()) return false;
  double sum = 0.0;
  for (double v : x.coords) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

void PointCloud::push_back(std::span<const double> x) {
  if (x.size() != dim_) throw std::invalid_argument("point dimension does not match cloud");
  data_.insert(data_.end(), x.begin(), x.end());
}

void PointCloud::append(const PointCloud& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("cloud dimensions differ");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
}

SimplexPoint vertex(std::size_t dim, std::size_t i) {
  SimplexPoint x{std::vector<double>(dim, 0.0)};
  x.coords.at(i) = 1.0;
  return x;
}

SimplexPoint barycenter(std::size_t dim) {
  return SimplexPoint{std::vector<double>(dim, 1.0 / static_cast<double>(dim))};
}

DirichletParams::DirichletParams(std::vector<double> a) : a_(std::move(a)), total_(0.0) {
  if (a_.empty()) throw std::invalid_argument("Dirichlet parameters must be nonempty");
  for (double v : a_) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("Dirichlet parameters must be finite and nonnegative");
    total_ += v;
  }
  if (!(total_ > 0.0)) throw std::invalid_argument("Dirichlet parameters must have positive total");
}

bool DirichletParams::strictly_positive() const {
  return std::all_of(a_.begin(), a_.end(), [](double v) { return v > 0.0; });
}

int PartitionPortrait::blocks() const { return std::accumulate(m.begin(), m.end(), 0); }

bool PartitionPortrait::valid() const {
  long total = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] < 0) return false;
    total += static_cast<long>(j + 1) * m[j];
  }
  return !m.empty() && total == static_cast<long>(m.size());
}

std::vector<int> block_sizes(const PartitionPortrait& portrait) {
  std::vector<int> b;
  b.reserve(static_cast<std::size_t>(portrait.blocks()));
  for (std::size_t j = 0; j < portrait.m.size(); ++j)
    b.insert(b.end(), static_cast<std::size_t>(portrait.m[j]), static_cast<int>(j + 1));
  return b;
}

int FaceSubset::size() const { return std::popcount(mask); }

std::vector<int> FaceSubset::indices() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (contains(static_cast<std::size_t>(i))) out.push_back(i);
  return out;
}

std::string FaceSubset::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int i : indices()) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

FaceSubset make_face(std::span<const int> indices, std::size_t dim) {
  if (indices.empty()) throw std::invalid_argument("face subset must be nonempty");
  if (dim > 32) throw std::invalid_argument("face subsets support at most 32 coordinates");
  FaceSubset t;
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= dim)
      throw std::invalid_argument("face index out of range");
    const std::uint32_t bit = 1U << i;
    if (t.mask & bit) throw std::invalid_argument("duplicate face index");
    t.mask |= bit;
  }
  return t;
}

FaceSubset support_of(std::span<const double> x) {
  if (x.size() > 32) throw std::invalid_argument("face subsets support at most 32 coordinates");
  FaceSubset t;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) t.mask |= 1U << i;
  return t;
}

FaceSubset support_of(const SimplexPoint& x) { return support_of(std::span<const double>(x.coords)); }

double FaceMasses::sum() const { return std::accumulate(w_.begin() + 1, w_.end(), 0.0); }

std::vector<FaceSubset> FaceMasses::faces() const {
  std::vector<FaceSubset> out;
  out.reserve(w_.size() - 1);
  for (std::uint32_t m = 1; m < w_.size(); ++m) out.push_back(FaceSubset{m});
  std::stable_sort(out.begin(), out.end(),
                   [](FaceSubset l, FaceSubset r) { return l.size() < r.size(); });
  return out;
}

double pochhammer(double c, int n) {
  if (n < 0) throw std::invalid_argument("pochhammer: n must be nonnegative");
  if (n <= 64) {
    double p = 1.0;
    for (int t = 0; t < n; ++t) p *= c + t;
    return p;
  }
  if (c == 0.0) return 0.0;
  return std::exp(std::lgamma(c + n) - std::lgamma(c));
}

double gamma_ratio(double x, double s) {
  const double rounded = std::round(s);
  if (rounded == s && s >= 0.0 && s <= 64.0) return pochhammer(x, static_cast<int>(s));
  if (x == 0.0) return 0.0;
  return std::exp(std::lgamma(x + s) - std::lgamma(x));
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double v = 1.0;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v < 9.0e15 ? std::round(v) : v;
}

namespace {

void compositions_rec(std::vector<int>& b, std::size_t pos, int remaining,
                      const std::function<void(const std::vector<int>&)>& fn) {
  if (pos + 1 == b.size()) {
    b[pos] = remaining;
    fn(b);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    b[pos] = v;
    compositions_rec(b, pos + 1, remaining - v, fn);
  }
  b[pos] = 0;
}

void portraits_rec(std::vector<int>& m, int j, int remaining,
                   const std::function<void(const std::vector<int>&)>& fn) {
  const int k = static_cast<int>(m.size());
  if (remaining == 0) {
    std::fill(m.begin() + (j - 1), m.end(), 0);
    fn(m);
    return;
  }
  if (j > k || j > remaining) return;
  for (int c = remaining / j; c >= 0; --c) {
    m[static_cast<std::size_t>(j - 1)] = c;
    portraits_rec(m, j + 1, remaining - j * c, fn);
  }
}

}  // namespace

void for_each_composition(int parts, int k, const std::function<void(const std::vector<int>&)>& fn,
                          double cap) {
  if (parts < 1) throw std::invalid_argument("compositions need at least one part");
  if (k < 0) throw std::invalid_argument("compositions need k >= 0");
  const double count = binomial(k + parts - 1, parts - 1);
  if (count > cap)
    throw EnumerationTooLarge("enumeration too large: " + std::to_string(count) +
                              " compositions exceed cap");
  std::vector<int> b(static_cast<std::size_t>(parts), 0);
  compositions_rec(b, 0, k, fn);
}

std::vector<Composition> enumerate_compositions(int parts, int k, double cap) {
  std::vector<Composition> out;
  for_each_composition(parts, k, [&](const std::vector<int>& b) { out.push_back({b, k}); }, cap);
  return out;
}

void for_each_portrait(int k, const std::function<void(const std::vector<int>&)>& fn, int cap) {
  if (k < 1) throw std::invalid_argument("portraits need k >= 1");
  if (k > cap)
    throw EnumerationTooLarge("enumeration too large: partitions of " + std::to_string(k) +
                              " exceed cap " + std::to_string(cap));
  std::vector<int> m(static_cast<std::size_t>(k), 0);
  portraits_rec(m, 1, k, fn);
}

std::vector<PartitionPortrait> enumerate_portraits(int k, int cap) {
  std::vector<PartitionPortrait> out;
  for_each_portrait(k, [&](const std::vector<int>& m) { out.push_back({m}); }, cap);
  return out;
}

double composition_weight(const Composition& b, const DirichletParams& params) {
  if (b.b.size() != params.size())
    throw std::invalid_argument("composition and parameters differ in length");
  // k!/(a)_k * prod_i (a_i)_{b_i}/b_i!, accumulated as ratios so nothing overflows.
  double w = 1.0;
  for (int t = 0; t < b.k; ++t) w *= (t + 1.0) / (params.total() + t);
  for (std::size_t i = 0; i < params.size(); ++i)
    for (int t = 0; t < b.b[i]; ++t) w *= (params[i] + t) / (t + 1.0);
  return w;
}

double ewens_pmf(const PartitionPortrait& m, double a) {
  if (!m.valid()) throw std::invalid_argument("invalid partition portrait");
  if (!(a > 0.0)) throw std::invalid_argument("Ewens concentration must be positive");
  const int k = m.k();
  // k! a^{sum m} / prod j^{m_j} m_j!  over  (a)_k, as one quotient when both fit.
  double num = 1.0;
  for (int t = 1; t <= k; ++t) num *= t;
  for (int j = 1; j <= k; ++j)
    for (int r = 1; r <= m.m[static_cast<std::size_t>(j - 1)]; ++r) num *= a / (j * static_cast<double>(r));
  const double den = pochhammer(a, k);
  if (std::isfinite(num) && std::isfinite(den) && den > 0.0) return num / den;
  double p = 1.0;
  for (int t = 0; t < k; ++t) p *= (t + 1.0) / (a + t);
  for (int j = 1; j <= k; ++j)
    for (int r = 1; r <= m.m[static_cast<std::size_t>(j - 1)]; ++r) p *= a / (j * static_cast<double>(r));
  return p;
}

double pk_polynomial(int k, std::span<const double> a) {
  if (k < 0) throw std::invalid_argument("P_k needs k >= 0");
  const int n = static_cast<int>(a.size());
  if (n > kMaxSubsetDim)
    throw std::invalid_argument("P_k inclusion-exclusion supports at most 21 variables");
  if (n == 0) return k == 0 ? 1.0 : 0.0;
  if (k < n) return 0.0;
  const std::uint32_t full = (1U << n) - 1U;
  std::vector<double> subset_sum(std::size_t{full} + 1, 0.0);
  double total = 0.0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int low = std::countr_zero(s);
    subset_sum[s] = subset_sum[s & (s - 1)] + a[static_cast<std::size_t>(low)];
    const double term = pochhammer(subset_sum[s], k);
    total += ((n - std::popcount(s)) % 2 == 0) ? term : -term;
  }
  return total;
}

FaceMasses face_weights(int k, const DirichletParams& params) {
  if (k < 1) throw std::invalid_argument("face weights need k >= 1");
  const int n = static_cast<int>(params.size());
  if (n > kMaxSubsetDim)
    throw std::invalid_argument("face weights support at most 21 coordinates");
  const std::uint32_t count = 1U << n;
  // g[S] = (a_S)_k, then Moebius inversion over the subset lattice.
  std::vector<double> subset_sum(count, 0.0);
  std::vector<double> g(count, 0.0);
  std::uint32_t zero_mask = 0;
  for (int i = 0; i < n; ++i)
    if (params[static_cast<std::size_t>(i)] == 0.0) zero_mask |= 1U << i;
  for (std::uint32_t s = 1; s < count; ++s) {
    subset_sum[s] = subset_sum[s & (s - 1)] + params[static_cast<std::size_t>(std::countr_zero(s))];
    g[s] = pochhammer(subset_sum[s], k);
  }
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = 1U << i;
    for (std::uint32_t s = 0; s < count; ++s)
      if (s & bit) g[s] -= g[s ^ bit];
  }
  const double norm = pochhammer(params.total(), k);
  FaceMasses w(static_cast<std::size_t>(n));
  for (std::uint32_t s = 1; s < count; ++s) {
    if (std::popcount(s) > k || (s & zero_mask)) continue;
    double v = g[s] / norm;
    // Rounding noise only; genuine masses are nonnegative.
    if (v < 0.0 && v > -1e-12) v = 0.0;
    w[FaceSubset{s}] = v;
  }
  return w;
}

}  // namespace simplex_lab
