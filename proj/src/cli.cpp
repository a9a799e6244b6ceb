#include "simplex_lab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "simplex_lab/chain.hpp"
#include "simplex_lab/continuous_c.hpp"
#include "simplex_lab/io.hpp"
#include "simplex_lab/parallel.hpp"
#include "simplex_lab/process.hpp"
#include "simplex_lab/samplers.hpp"
#include "simplex_lab/transforms.hpp"
#include "simplex_lab/verify.hpp"

namespace simplex_lab {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string dist;
  std::vector<double> a;
  std::optional<int> k;
  std::optional<double> c;
  std::optional<int> d;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string format = "csv";
  std::string out_path;
  std::vector<double> f;
  std::string method = "partitions";
  std::size_t mc = 0;
  int burn_in = 200;
  int thin = 1;
  std::vector<double> x0;
  std::string route = "mixture";
  std::optional<double> epsilon;
  std::string base = "uniform";
  std::string suite = "all";
  std::size_t verify_n = 0;
};

void add_rng_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--stream", o.stream, "RNG stream id");
}

void add_params_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--a", o.a, "Dirichlet parameters (comma list or repeated)")->delimiter(',');
}

DirichletParams params_of(const Options& o) {
  if (o.a.empty()) throw UsageError("--a is required");
  return DirichletParams(o.a);
}

int require_k(const Options& o) {
  if (!o.k) throw UsageError("--k is required");
  if (*o.k < 1) throw UsageError("--k must be >= 1");
  return *o.k;
}

// Writes to --out when given, otherwise to the command's stdout.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream;

  Sink(const std::string& path, std::ostream& fallback) : stream(&fallback) {
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file) throw UsageError("cannot open output file: " + path);
      stream = file.get();
    }
  }
  std::ostream& operator*() { return *stream; }
};

int cmd_sample(const Options& o, std::ostream& out) {
  if (o.format != "csv" && o.format != "jsonl") throw UsageError("--format must be csv or jsonl");
  PointSampler sampler;
  std::size_t dim = 0;
  if (o.dist == "dirichlet" || o.dist == "bernoulli" || o.dist == "qb-mixture" || o.dist == "qb-ewens") {
    const DirichletParams params = params_of(o);
    dim = params.size();
    if (o.dist == "dirichlet") {
      sampler = [params](RngStream& g) { return sample_dirichlet(params, g); };
    } else if (o.dist == "bernoulli") {
      sampler = [params](RngStream& g) { return sample_bernoulli_vertex(params, g); };
    } else {
      const QuasiBernoulliSpec spec{params, require_k(o),
                                    o.dist == "qb-mixture" ? QbRoute::mixture : QbRoute::ewens};
      sampler = [spec](RngStream& g) { return sample_quasi_bernoulli(spec, g); };
    }
  } else if (o.dist == "face-uniform") {
    if (!o.d || !o.k) throw UsageError("face-uniform needs --d and --k");
    if (*o.d < 0 || *o.k < 0 || *o.k > *o.d) throw UsageError("face-uniform needs 0 <= k <= d");
    const int d = *o.d;
    const int k = *o.k;
    dim = static_cast<std::size_t>(d + 1);
    sampler = [d, k](RngStream& g) { return sample_face_uniform(d, k, g); };
  } else if (o.dist == "nu") {
    if (!o.c || !o.d) throw UsageError("nu needs --c and --d");
    if (!(*o.c > 0.0) || *o.d < 1) throw UsageError("nu needs c > 0 and d >= 1");
    if (!exists_probability(*o.c, *o.d)) throw NonexistentMeasure("nu_{c,d} is not a probability");
    const double c = *o.c;
    const int d = *o.d;
    dim = static_cast<std::size_t>(d + 1);
    sampler = [c, d](RngStream& g) { return sample_nu(c, d, g); };
  } else {
    throw UsageError("unknown --dist: " + o.dist);
  }

  Sink sink(o.out_path, out);
  const bool csv = o.format == "csv";
  if (csv) write_csv_header(*sink, dim);
  stream_points(o.n, dim, RngStream(o.seed, o.stream), sampler, [&](const PointCloud& part) {
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (csv) {
        write_csv_row(*sink, part[i]);
      } else {
        write_point_jsonl(*sink, part[i]);
      }
    }
  });
  return kExitOk;
}

int cmd_tc(const Options& o, std::ostream& out) {
  if (o.f.empty()) throw UsageError("--f is required");
  for (double v : o.f)
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("--f must be strictly positive");
  const DirichletParams params = params_of(o);
  if (o.f.size() != params.size()) throw UsageError("--f and --a differ in length");

  double exponent = 0.0;
  PointSampler sampler;
  if (o.dist == "dirichlet") {
    if (o.k) throw UsageError("--k does not apply to the Dirichlet transform");
    exponent = o.c.value_or(params.total());
    if (std::abs(exponent - params.total()) > 1e-12 * std::max(1.0, params.total()) && o.mc == 0)
      throw UsageError("closed form needs c = sum(a); pass --mc for other exponents");
    if (std::abs(exponent - params.total()) <= 1e-12 * std::max(1.0, params.total()))
      out << "value: " << format_double(tc_dirichlet({o.f, exponent}, params)) << '\n';
    sampler = [params](RngStream& g) { return sample_dirichlet(params, g); };
  } else if (o.dist == "qb") {
    if (o.c) throw UsageError("the quasi-Bernoulli transform uses --k as its exponent");
    const int k = require_k(o);
    exponent = k;
    if (o.method == "both") {
      const double comp = tc_quasi_bernoulli(params, o.f, k, QbMethod::compositions);
      const double part = tc_quasi_bernoulli(params, o.f, k, QbMethod::partitions);
      out << "compositions: " << format_double(comp) << '\n'
          << "partitions: " << format_double(part) << '\n'
          << "relative_gap: " << format_double(std::abs(comp - part) / std::abs(part)) << '\n';
    } else {
      QbMethod method;
      try {
        method = parse_method(o.method);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      out << "value: " << format_double(tc_quasi_bernoulli(params, o.f, k, method)) << '\n';
    }
    const QuasiBernoulliSpec spec{params, k, QbRoute::mixture};
    sampler = [spec](RngStream& g) { return sample_quasi_bernoulli(spec, g); };
  } else {
    throw UsageError("tc --dist must be dirichlet or qb");
  }

  if (o.mc > 0) {
    const PointCloud cloud = draw_points(o.mc, params.size(), RngStream(o.seed, o.stream), sampler);
    const McEstimate est = tc_monte_carlo(cloud, {o.f, exponent});
    out << "mc_estimate: " << format_double(est.estimate) << '\n'
        << "mc_std_error: " << format_double(est.std_error) << '\n'
        << "mc_n: " << est.n << '\n';
  }
  return kExitOk;
}

int cmd_weights(const Options& o, std::ostream& out) {
  const bool by_face = !o.a.empty() || o.k;
  const bool by_dim = o.c || o.d;
  if (by_face == by_dim) throw UsageError("weights needs either --a/--k or --c/--d");
  if (by_face) {
    const DirichletParams params = params_of(o);
    const FaceMasses w = face_weights(require_k(o), params);
    for (const FaceSubset& t : w.faces()) out << t.to_string() << ": " << format_double(w[t]) << '\n';
    out << "sum: " << format_double(w.sum()) << '\n';
    return kExitOk;
  }
  if (!o.c || !o.d) throw UsageError("weights needs both --c and --d");
  if (!(*o.c > 0.0) || *o.d < 1) throw UsageError("weights needs c > 0 and d >= 1");
  const NuSpec nu = nu_weights(*o.c, *o.d);
  double sum = 0.0;
  for (int k = 0; k <= *o.d; ++k) {
    const double w = nu.dim_weights[static_cast<std::size_t>(k)];
    sum += w;
    out << "dim " << k << ": " << format_double(w) << " per_face: " << format_double(nu.per_face(k))
        << '\n';
  }
  out << "sum: " << format_double(sum) << '\n';
  out << "probability: " << (exists_probability(*o.c, *o.d) ? "true" : "false") << '\n';
  return kExitOk;
}

QbRoute route_of(const Options& o) {
  try {
    return parse_route(o.route);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_chain(const Options& o, std::ostream& out) {
  const DirichletParams params = params_of(o);
  const int k = require_k(o);
  Sink sink(o.out_path, out);
  if (o.epsilon) {
    // Independent exact-stationary draws from the backward series.
    const double eps = *o.epsilon;
    if (!(eps > 0.0 && eps < 1.0)) throw UsageError("--epsilon must lie in (0,1)");
    const QbRoute route = route_of(o);
    write_csv_header(*sink, params.size());
    stream_points(o.n, params.size(), RngStream(o.seed, o.stream),
                  [&](RngStream& g) { return backward_series_sample(params, k, eps, g, route).point; },
                  [&](const PointCloud& part) {
                    for (std::size_t i = 0; i < part.size(); ++i) write_csv_row(*sink, part[i]);
                  });
    return kExitOk;
  }
  ChainConfig config{params, k, o.burn_in, o.thin,
                     o.x0.empty() ? barycenter(params.size()) : SimplexPoint{o.x0}, route_of(o)};
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  RngStream rng(o.seed, o.stream);
  write_chain_csv(*sink, config, o.n, rng);
  return kExitOk;
}

int cmd_process(const Options& o, std::ostream& out) {
  if (o.a.size() != 1) throw UsageError("process needs --a with a single total mass");
  const int k = require_k(o);
  const BaseMeasure measure = BaseMeasure::parse(o.a[0], o.base);
  Sink sink(o.out_path, out);
  const RngStream base(o.seed, o.stream);
  const std::size_t chunks = (o.n + kBatchChunk - 1) / kBatchChunk;
  const std::size_t group = 4 * worker_count();
  for (std::size_t first = 0; first < chunks; first += group) {
    const std::size_t in_group = std::min(group, chunks - first);
    std::vector<std::vector<AtomicProbability>> parts(in_group);
    parallel_for(in_group, [&](std::size_t t) {
      const std::size_t j = first + t;
      RngStream g = base.substream(j);
      const std::size_t count = std::min(kBatchChunk, o.n - j * kBatchChunk);
      for (std::size_t i = 0; i < count; ++i) parts[t].push_back(sample_qb_process(k, measure, g));
    });
    for (const auto& part : parts)
      for (const auto& p : part) write_atoms_jsonl(*sink, p);
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto reports = run_suite(o.suite, o.seed, o.verify_n);
  write_reports(out, reports);
  const bool pass = all_pass(reports);
  out << (pass ? "all checks passed" : "some checks failed") << '\n';
  return pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampling and verification tools for distributions on the simplex", "simplex_lab"};
  app.require_subcommand(1);
  Options o;

  auto* sample = app.add_subcommand("sample", "Draw points on the simplex");
  sample->add_option("--dist", o.dist, "dirichlet|bernoulli|qb-mixture|qb-ewens|face-uniform|nu")
      ->required()
      ->check(CLI::IsMember({"dirichlet", "bernoulli", "qb-mixture", "qb-ewens", "face-uniform", "nu"}));
  add_params_flag(sample, o);
  auto* sk = sample->add_option("--k", o.k, "quasi-Bernoulli order or face dimension");
  auto* sc = sample->add_option("--c", o.c, "nu parameter c");
  sk->excludes(sc);
  sample->add_option("--d", o.d, "simplex dimension");
  sample->add_option("-n", o.n, "number of draws");
  sample->add_option("--format", o.format, "csv|jsonl");
  sample->add_option("--out", o.out_path, "output file");
  add_rng_flags(sample, o);

  auto* tc = app.add_subcommand("tc", "Evaluate T_c transforms");
  tc->add_option("--dist", o.dist, "dirichlet|qb")->required()->check(CLI::IsMember({"dirichlet", "qb"}));
  add_params_flag(tc, o);
  auto* tk = tc->add_option("--k", o.k, "quasi-Bernoulli order");
  auto* tcc = tc->add_option("--c", o.c, "exponent for the Dirichlet transform");
  tk->excludes(tcc);
  tc->add_option("--f", o.f, "evaluation point")->delimiter(',')->required();
  tc->add_option("--method", o.method, "compositions|partitions|both")
      ->check(CLI::IsMember({"compositions", "partitions", "both"}));
  tc->add_option("--mc", o.mc, "add a Monte Carlo estimate from this many draws");
  add_rng_flags(tc, o);

  auto* weights = app.add_subcommand("weights", "Face weights of B_k(a) or dimension weights of nu_{c,d}");
  add_params_flag(weights, o);
  auto* wk = weights->add_option("--k", o.k, "quasi-Bernoulli order");
  auto* wc = weights->add_option("--c", o.c, "nu parameter c");
  wk->excludes(wc);
  weights->add_option("--d", o.d, "simplex dimension");

  auto* chain = app.add_subcommand("chain", "Run the Dirichlet-stationary Markov chain");
  add_params_flag(chain, o);
  chain->add_option("--k", o.k, "quasi-Bernoulli order")->required();
  chain->add_option("-n", o.n, "number of emitted states");
  chain->add_option("--burn-in", o.burn_in, "steps discarded first");
  chain->add_option("--thin", o.thin, "steps per emitted state");
  chain->add_option("--x0", o.x0, "starting point")->delimiter(',');
  chain->add_option("--route", o.route, "mixture|ewens");
  chain->add_option("--epsilon", o.epsilon, "emit backward-series draws truncated at this residual");
  chain->add_option("--out", o.out_path, "output file");
  add_rng_flags(chain, o);

  auto* process = app.add_subcommand("process", "Draw quasi-Bernoulli random probabilities on [0,1]");
  add_params_flag(process, o);
  process->add_option("--k", o.k, "order")->required();
  process->add_option("--base", o.base, "uniform | beta:p,q | pl:x:F,...");
  process->add_option("-n", o.n, "number of draws");
  process->add_option("--out", o.out_path, "output file");
  add_rng_flags(process, o);

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", o.suite, "core|transforms|chain|process|all")
      ->check(CLI::IsMember({"core", "transforms", "chain", "process", "all"}));
  verify->add_option("--seed", o.seed, "RNG seed");
  verify->add_option("-n", o.verify_n, "sample size override");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*sample) return cmd_sample(o, out);
    if (*tc) return cmd_tc(o, out);
    if (*weights) return cmd_weights(o, out);
    if (*chain) return cmd_chain(o, out);
    if (*process) return cmd_process(o, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const NonexistentMeasure& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonexistent;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace simplex_lab
