#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "injnorm/bounds.hpp"
#include "injnorm/ensembles.hpp"
#include "injnorm/montecarlo.hpp"
#include "injnorm/optimize.hpp"
#include "injnorm/parallel.hpp"
#include "injnorm/rng.hpp"
#include "injnorm/specialfn.hpp"
#include "injnorm/tensor.hpp"

#include "report.hpp"

namespace {

using namespace injnorm;
using tools::CsvTable;
using tools::num;
using tools::RunManifest;
using tools::Series;

constexpr const char* kVersion = "injnorm 0.1.0";

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const long v = std::stol(part);
    if (v < 1) throw CLI::ValidationError("--dims", "dimensions must be >= 1");
    dims.push_back(static_cast<std::size_t>(v));
  }
  if (dims.empty()) throw CLI::ValidationError("--dims", "empty dimension list");
  return dims;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
  return out;
}

std::string dims_cell(std::span<const std::size_t> dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(dims[i]);
  }
  return s;
}

DistKind resolve_dist(const std::string& name, Field field) {
  if (name == "gauss") {
    return field == Field::real ? DistKind::gaussian_real : DistKind::gaussian_complex;
  }
  if (name == "rademacher") return DistKind::rademacher;
  if (name == "uniform") return DistKind::uniform_sym;
  if (name == "steinhaus") return DistKind::steinhaus;
  throw CLI::ValidationError("--dist", "unknown distribution: " + name);
}

ModelSpec make_spec(const std::string& model, const std::vector<std::size_t>& dims,
                    const std::string& dist, std::size_t rank) {
  ModelSpec spec;
  if (model == "a-real") {
    spec.family = ModelFamily::a;
    spec.field = Field::real;
  } else if (model == "a-complex") {
    spec.family = ModelFamily::a;
    spec.field = Field::complex;
  } else if (model == "sym") {
    spec.family = ModelFamily::s;
    spec.field = Field::complex;
  } else if (model == "sym-tilde") {
    spec.family = ModelFamily::s_tilde;
    spec.field = Field::complex;
  } else if (model == "bounded-rank") {
    spec.family = ModelFamily::b;
    spec.field = Field::complex;
  } else {
    throw CLI::ValidationError("--model", "unknown model: " + model);
  }
  spec.dims = dims;
  spec.rank = rank;
  spec.dist = {resolve_dist(dist, spec.field), 1.0};
  validate(spec);
  return spec;
}

std::string table_or_json(const CsvTable& table, bool as_json) {
  if (!as_json) return table.to_string();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < table.header.size(); ++i) obj[table.header[i]] = row[i];
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

// ---------------------------------------------------------------- bound --

struct BoundArgs {
  std::string model = "a-complex", dims_text, dist = "gauss", out;
  std::size_t rank = 0;
  long long k = 0;
  bool optimize = false, as_json = false;
};

int run_bound(const BoundArgs& a) {
  Timer timer;
  const auto dims = parse_dims(a.dims_text);
  const ModelSpec spec = make_spec(a.model, dims, a.dist, a.rank);
  BoundQuery query{spec, a.optimize ? std::nullopt : std::optional<long long>(a.k), {}};
  const BoundResult res = a.optimize ? optimal_k(query) : finite_bound(query);

  CsvTable table;
  table.header = {"model", "dims", "k", "log_value", "value", "evaluations"};
  table.add_row({a.model, dims_cell(dims), std::to_string(*res.k_used),
                 num(res.log_value), num(res.value), std::to_string(res.evaluations)});

  RunManifest manifest{"bound",
                       {{"model", a.model},
                        {"dims", a.dims_text},
                        {"dist", a.dist},
                        {"rank", std::to_string(a.rank)},
                        {"k", a.optimize ? std::string("optimize") : std::to_string(a.k)}},
                       0,
                       kVersion,
                       timer.seconds()};
  tools::emit_output(a.out, table_or_json(table, a.as_json), manifest);
  return 0;
}

// ----------------------------------------------------------- asymptotic --

struct AsymptoticArgs {
  std::string model = "a-real", eta_text, out;
  long long p = 3;
  bool normalizers = false, as_json = false;
};

int run_asymptotic(const AsymptoticArgs& a) {
  Timer timer;
  AsymptoticQuery query;
  query.p = a.p;
  if (a.model == "a-real") {
    query.family = ModelFamily::a;
    query.field = Field::real;
  } else if (a.model == "a-complex") {
    query.family = ModelFamily::a;
    query.field = Field::complex;
  } else if (a.model == "sym" || a.model == "sym-tilde") {
    query.family = ModelFamily::s;
    query.field = Field::complex;
  } else if (a.model == "bounded-rank") {
    query.family = ModelFamily::b;
    query.field = Field::complex;
  } else {
    throw CLI::ValidationError("--model", "unknown model: " + a.model);
  }
  if (!a.eta_text.empty()) query.eta = parse_doubles(a.eta_text);
  const AsymptoticResult res = asymptotic_bound(query);

  CsvTable table;
  table.header = {"model", "p", "alpha_min", "log_value", "value"};
  if (a.normalizers) table.header.push_back("normalized");
  std::vector<std::string> row{a.model, std::to_string(a.p), num(res.alpha_min),
                               num(res.bound.log_value), num(res.bound.value)};
  if (a.normalizers) {
    const double pp = static_cast<double>(a.p);
    double norm = 1.0;
    if (query.family == ModelFamily::a) {
      norm = std::sqrt(pp * std::log(pp));
    } else if (query.family == ModelFamily::s) {
      norm = std::sqrt(std::log(pp));
    }
    row.push_back(num(res.bound.value / norm));
  }
  table.add_row(std::move(row));

  RunManifest manifest{"asymptotic",
                       {{"model", a.model},
                        {"p", std::to_string(a.p)},
                        {"eta", a.eta_text}},
                       0,
                       kVersion,
                       timer.seconds()};
  tools::emit_output(a.out, table_or_json(table, a.as_json), manifest);
  return 0;
}

// ------------------------------------------------------------- estimate --

struct EstimatorFlags {
  std::string method = "als";
  long long max_iters = 0;  // 0: method default
  double rel_tol = 1e-10;
  long long restarts = 1;
  double step_size = 0.1, noise_initial = 0.05, noise_decay = 0.97;

  EstimatorConfig build(SeedSpec seed) const {
    EstimatorConfig cfg;
    cfg.method = method == "pga" ? EstimateMethod::pga : EstimateMethod::als;
    cfg.max_iters = max_iters > 0 ? max_iters
                                  : (cfg.method == EstimateMethod::pga ? 2000 : 500);
    cfg.rel_tol = rel_tol;
    cfg.restarts = restarts;
    cfg.step_size = step_size;
    cfg.noise_initial = noise_initial;
    cfg.noise_decay = noise_decay;
    cfg.seed = seed;
    return cfg;
  }
};

struct EstimateArgs {
  std::string model = "a-complex", dims_text, dist = "gauss", out, normalize = "none";
  std::string d_grid_text, load_path, dump_path, trace_csv;
  std::size_t rank = 0;
  long long p = 0, realizations = 1;
  std::uint64_t seed = 0;
  int threads = 0;
  bool bound_column = false, as_json = false;
  EstimatorFlags est;
};

double hs_normalizer(std::span<const std::size_t> dims) {
  double log_prod = 0.0;
  for (std::size_t d : dims) log_prod += std::log(static_cast<double>(d));
  const double p = static_cast<double>(dims.size());
  return std::exp(0.5 * (1.0 - 1.0 / p) * log_prod);
}

int run_estimate(const EstimateArgs& a) {
  Timer timer;
  const int threads = a.threads > 0 ? a.threads : hardware_threads();
  const bool normalize_hs = a.normalize == "hs";
  if (a.normalize != "none" && a.normalize != "hs") {
    throw CLI::ValidationError("--normalize", "expected none or hs");
  }

  CsvTable table;
  table.header = {"model", "dims", "dist", "method", "realizations",
                  "restarts", "mean", "stderr", "dispersion"};
  if (a.bound_column) table.header.push_back("bound");

  CsvTable trace;
  trace.header = {"dims", "realization", "restart", "value"};

  if (!a.load_path.empty()) {
    std::ifstream in(a.load_path);
    if (!in) throw std::runtime_error("cannot open tensor file: " + a.load_path);
    DenseTensor t = load_tensor(in);
    if (normalize_hs) {
      const double hs = frobenius_norm(t);
      if (hs > 0.0) {
        for (std::size_t i = 0; i < t.size(); ++i) t[i] /= hs;
      }
    }
    EstimatorConfig cfg = a.est.build(SeedSpec{a.seed, 1});
    const EstimateResult res = multi_restart(t, cfg);
    const auto [lo, hi] =
        std::minmax_element(res.restart_values.begin(), res.restart_values.end());
    table.add_row({"file", dims_cell(t.shape()), "-", a.est.method, "1",
                   std::to_string(cfg.restarts), num(res.value), num(0.0),
                   num(*hi - *lo)});
    for (std::size_t r = 0; r < res.restart_values.size(); ++r) {
      trace.add_row({dims_cell(t.shape()), "0", std::to_string(r),
                     num(res.restart_values[r])});
    }
  } else {
    std::vector<std::vector<std::size_t>> shapes;
    if (!a.d_grid_text.empty()) {
      if (a.p < 1) throw CLI::ValidationError("--p", "required with --d-grid");
      for (const std::size_t d : parse_dims(a.d_grid_text)) {
        shapes.emplace_back(static_cast<std::size_t>(a.p), d);
      }
    } else if (!a.dims_text.empty()) {
      shapes.push_back(parse_dims(a.dims_text));
    } else {
      throw CLI::ValidationError("--dims", "need --dims or --d-grid");
    }

    for (const auto& dims : shapes) {
      const ModelSpec spec = make_spec(a.model, dims, a.dist, a.rank);
      const SeedSpec base{a.seed, 0};

      std::vector<double> values(static_cast<std::size_t>(a.realizations));
      std::vector<double> dispersion(values.size());
      std::vector<std::vector<double>> restart_values(values.size());
      parallel_for(values.size(), threads, [&](std::size_t r) {
        DenseTensor t = sample_tensor(spec, substream(base, 2 * r));
        if (normalize_hs) {
          const double hs = frobenius_norm(t);
          if (hs > 0.0) {
            for (std::size_t i = 0; i < t.size(); ++i) t[i] /= hs;
          }
        }
        EstimatorConfig cfg = a.est.build(substream(base, 2 * r + 1));
        const EstimateResult res = multi_restart(t, cfg);
        values[r] = res.value;
        const auto [lo, hi] = std::minmax_element(res.restart_values.begin(),
                                                  res.restart_values.end());
        dispersion[r] = *hi - *lo;
        restart_values[r] = res.restart_values;
        if (r == 0 && !a.dump_path.empty()) {
          std::ofstream out(a.dump_path, std::ios::binary);
          if (out) save_tensor(t, out);
        }
      });

      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double se = values.size() > 1
                            ? std::sqrt(ss / static_cast<double>(values.size() - 1) /
                                        static_cast<double>(values.size()))
                            : 0.0;
      double disp = 0.0;
      for (double v : dispersion) disp += v;
      disp /= static_cast<double>(dispersion.size());

      std::vector<std::string> row{a.model,
                                   dims_cell(dims),
                                   a.dist,
                                   a.est.method,
                                   std::to_string(a.realizations),
                                   std::to_string(a.est.restarts),
                                   num(mean),
                                   num(se),
                                   num(disp)};
      if (a.bound_column) {
        double bound = optimal_k(BoundQuery{spec, std::nullopt, {}}).value;
        if (normalize_hs) bound /= hs_normalizer(dims);
        row.push_back(num(bound));
      }
      table.add_row(std::move(row));

      for (std::size_t r = 0; r < restart_values.size(); ++r) {
        for (std::size_t j = 0; j < restart_values[r].size(); ++j) {
          trace.add_row({dims_cell(dims), std::to_string(r), std::to_string(j),
                         num(restart_values[r][j])});
        }
      }
    }
  }

  RunManifest manifest{"estimate",
                       {{"model", a.model},
                        {"dims", a.dims_text},
                        {"d-grid", a.d_grid_text},
                        {"p", std::to_string(a.p)},
                        {"dist", a.dist},
                        {"rank", std::to_string(a.rank)},
                        {"method", a.est.method},
                        {"restarts", std::to_string(a.est.restarts)},
                        {"realizations", std::to_string(a.realizations)},
                        {"normalize", a.normalize},
                        {"seed", std::to_string(a.seed)}},
                       a.seed,
                       kVersion,
                       timer.seconds()};
  tools::emit_output(a.out, table_or_json(table, a.as_json), manifest);
  if (!a.trace_csv.empty()) {
    RunManifest tm = manifest;
    tm.subcommand = "estimate-trace";
    tools::emit_output(a.trace_csv, trace.to_string(), tm);
  }
  return 0;
}

// --------------------------------------------------------------- verify --

struct VerifyArgs {
  std::string out;
  long long instances = 50, samples = 200000, k = 0, p = 0;
  std::size_t d = 0;
  double slack = 6.0;
  std::uint64_t seed = 0;
  int threads = 0;
  long long restarts = 6;
  bool corrupt_prefactor = false;
};

int run_verify(const VerifyArgs& a) {
  Timer timer;
  const int threads = a.threads > 0 ? a.threads : hardware_threads();
  const double offset = a.corrupt_prefactor ? -std::log(2.0) : 0.0;

  const char* families[4] = {"a-real", "a-complex", "sym", "sym-tilde"};
  nlohmann::ordered_json instances = nlohmann::ordered_json::array();
  bool all_pass = true;

  CounterRng pick(SeedSpec{a.seed, 0x67726964ULL});
  for (long long i = 0; i < a.instances; ++i) {
    const std::string model = families[i % 4];
    const std::size_t d = a.d ? a.d : 2 + pick.next_u64() % 3;       // 2..4
    const long long p = a.p ? a.p : 1 + static_cast<long long>(pick.next_u64() % 3);
    const long long k = a.k ? a.k : 1 + static_cast<long long>(pick.next_u64() % 4);
    std::string dist = "gauss";
    if (model == "a-real") {
      const char* real_dists[3] = {"gauss", "rademacher", "uniform"};
      dist = real_dists[pick.next_u64() % 3];
    } else {
      dist = (pick.next_u64() % 2) ? "steinhaus" : "gauss";
    }

    const ModelSpec spec =
        make_spec(model, std::vector<std::size_t>(static_cast<std::size_t>(p), d),
                  dist, 0);
    const DenseTensor t = sample_tensor(spec, substream({a.seed, 1}, i));

    EstimatorConfig est;
    est.method = EstimateMethod::als;
    est.restarts = a.restarts;
    const VerificationReport rep = verify_deterministic_bound(
        t, prefactor_for(spec), k, a.samples, a.slack, substream({a.seed, 2}, i),
        est, threads, offset);

    all_pass = all_pass && rep.pass;
    const double denom = rep.moment.stderr_of_mean * std::exp(rep.prefactor_log_used);
    const double gap_sigmas =
        denom > 0.0
            ? (std::exp(rep.prefactor_log_used) * rep.moment.mean -
               std::exp(rep.lhs_log)) / denom
            : std::numeric_limits<double>::infinity();
    nlohmann::ordered_json row;
    row["instance"] = i;
    row["model"] = model;
    row["dist"] = dist;
    row["d"] = d;
    row["p"] = p;
    row["k"] = k;
    row["estimate"] = rep.estimate;
    row["moment_mean"] = rep.moment.mean;
    row["moment_stderr"] = rep.moment.stderr_of_mean;
    row["lhs_log"] = rep.lhs_log;
    row["rhs_log"] = rep.rhs_log;
    row["gap_sigmas"] = gap_sigmas;
    row["pass"] = rep.pass;
    instances.push_back(row);
  }

  nlohmann::ordered_json report;
  report["suite"] = "moment-inequality-verification";
  report["instances"] = instances;
  report["samples_per_instance"] = a.samples;
  report["slack_sigmas"] = a.slack;
  report["corrupt_prefactor"] = a.corrupt_prefactor;
  report["all_pass"] = all_pass;

  RunManifest manifest{"verify",
                       {{"instances", std::to_string(a.instances)},
                        {"samples", std::to_string(a.samples)},
                        {"slack", num(a.slack)},
                        {"seed", std::to_string(a.seed)},
                        {"corrupt-prefactor", a.corrupt_prefactor ? "true" : "false"}},
                       a.seed,
                       kVersion,
                       timer.seconds()};
  tools::emit_output(a.out, report.dump(2) + "\n", manifest);
  return all_pass ? 0 : 1;
}

// -------------------------------------------------------------- compare --

struct CompareArgs {
  std::string regime = "dinf", p_range = "3:8", dist = "gauss", out;
  double eps = 0.0, cboed = 1.0;
  bool as_json = false;
};

int run_compare(const CompareArgs& a) {
  Timer timer;
  std::optional<std::size_t> d;
  if (a.regime != "dinf") {
    if (a.regime.rfind("d=", 0) != 0) {
      throw CLI::ValidationError("--regime", "expected dinf or d=N");
    }
    const long v = std::stol(a.regime.substr(2));
    if (v < 2) throw CLI::ValidationError("--regime", "need d >= 2");
    d = static_cast<std::size_t>(v);
  }
  const auto colon = a.p_range.find(':');
  if (colon == std::string::npos) {
    throw CLI::ValidationError("--p-range", "expected a:b");
  }
  const long long p_lo = std::stoll(a.p_range.substr(0, colon));
  const long long p_hi = std::stoll(a.p_range.substr(colon + 1));
  if (p_lo < 2 || p_hi < p_lo) throw CLI::ValidationError("--p-range", "need 2 <= a <= b");

  ComparisonParams params;
  params.epsilon = a.eps;
  params.boedihardjo_c = a.cboed;
  params.gaussian = a.dist == "gauss";
  if (a.dist != "gauss" && a.dist != "rigid") {
    throw CLI::ValidationError("--dist", "expected gauss or rigid");
  }

  CsvTable table;
  table.header = {"bound"};
  for (long long p = p_lo; p <= p_hi; ++p) table.header.push_back("p=" + std::to_string(p));

  std::vector<std::vector<ComparisonEntry>> columns;
  for (long long p = p_lo; p <= p_hi; ++p) columns.push_back(comparison_bounds(d, p, params));

  for (std::size_t r = 0; r < columns.front().size(); ++r) {
    std::vector<std::string> row{columns.front()[r].name};
    for (const auto& col : columns) {
      row.push_back(col[r].value.has_value() ? num(*col[r].value) : "---");
    }
    table.add_row(std::move(row));
  }

  RunManifest manifest{"compare",
                       {{"regime", a.regime},
                        {"p-range", a.p_range},
                        {"dist", a.dist},
                        {"eps", num(a.eps)},
                        {"cboed", num(a.cboed)}},
                       0,
                       kVersion,
                       timer.seconds()};
  tools::emit_output(a.out, table_or_json(table, a.as_json), manifest);
  return 0;
}

// --------------------------------------------------------------- figure --

struct FigureArgs {
  std::string name, out, svg_path, normalize = "none";
  long long p = 0, realizations = 8;
  std::uint64_t seed = 0;
  int threads = 0;
  bool full = false, as_json = false;
  EstimatorFlags est{.restarts = 8};
};

int run_figure(const FigureArgs& a) {
  Timer timer;
  if (a.p < 2) throw CLI::ValidationError("--p", "figures require an explicit --p >= 2");
  const int threads = a.threads > 0 ? a.threads : hardware_threads();
  const bool normalize_hs = a.normalize == "hs";

  std::vector<std::size_t> grid;
  std::string model, dist = "gauss";
  std::size_t rank = 0;
  if (a.name == "steinhaus") {
    grid = a.full ? std::vector<std::size_t>{2, 4, 8, 16, 24, 32, 48, 64}
                  : std::vector<std::size_t>{2, 4, 8, 16, 24, 32};
    model = "a-complex";
    dist = "steinhaus";
  } else if (a.name == "bounded-rank-small" || a.name == "bounded-rank-r25") {
    grid = a.full ? std::vector<std::size_t>{4, 8, 16, 32, 64, 96, 128}
                  : std::vector<std::size_t>{4, 8, 16, 32, 64};
    model = "bounded-rank";
    rank = a.name == "bounded-rank-r25" ? 25 : 3;
  } else {
    throw CLI::ValidationError("--name", "unknown figure: " + a.name);
  }

  const auto sweep = [&](const ModelSpec& spec, const std::string& method,
                         double& mean, double& se) {
    EstimatorFlags flags = a.est;
    flags.method = method;
    EstimatorConfig cfg = flags.build(SeedSpec{});
    SweepSummary s;
    if (normalize_hs) {
      // normalize each sampled tensor to unit Frobenius norm
      std::vector<double> values(static_cast<std::size_t>(a.realizations));
      const SeedSpec base{a.seed, 7};
      parallel_for(values.size(), threads, [&](std::size_t r) {
        DenseTensor t = sample_tensor(spec, substream(base, 2 * r));
        const double hs = frobenius_norm(t);
        if (hs > 0.0) {
          for (std::size_t i = 0; i < t.size(); ++i) t[i] /= hs;
        }
        EstimatorConfig c2 = cfg;
        c2.seed = substream(base, 2 * r + 1);
        values[r] = multi_restart(t, c2).value;
      });
      double sum = 0.0;
      for (double v : values) sum += v;
      mean = sum / static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      se = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1) /
                                         static_cast<double>(values.size()))
                             : 0.0;
    } else {
      cfg.seed = SeedSpec{};
      s = expectation_sweep(spec, cfg, a.realizations, SeedSpec{a.seed, 7}, threads);
      mean = s.mean;
      se = s.stderr_of_mean;
    }
  };

  CsvTable table;
  std::vector<Series> series;
  if (a.name == "bounded-rank-r25") {
    table.header = {"d", "als_mean", "als_stderr", "pga_mean", "pga_stderr"};
    Series als{"als", {}, {}}, pga{"pga", {}, {}};
    for (std::size_t d : grid) {
      const ModelSpec spec = make_spec(
          model, std::vector<std::size_t>(static_cast<std::size_t>(a.p), d), dist, rank);
      double am, ase, pm, pse;
      sweep(spec, "als", am, ase);
      sweep(spec, "pga", pm, pse);
      table.add_row({std::to_string(d), num(am), num(ase), num(pm), num(pse)});
      als.x.push_back(static_cast<double>(d));
      als.y.push_back(am);
      pga.x.push_back(static_cast<double>(d));
      pga.y.push_back(pm);
    }
    series = {als, pga};
  } else {
    const bool with_limit = a.name != "steinhaus";
    table.header = {"d", "estimate_mean", "estimate_stderr", "bound"};
    if (with_limit) table.header.push_back("limit");
    Series est{"estimate", {}, {}}, bnd{"bound", {}, {}}, lim{"limit", {}, {}};
    for (std::size_t d : grid) {
      const ModelSpec spec = make_spec(
          model, std::vector<std::size_t>(static_cast<std::size_t>(a.p), d), dist, rank);
      double mean, se;
      sweep(spec, a.est.method, mean, se);
      double bound = optimal_k(BoundQuery{spec, std::nullopt, {}}).value;
      if (normalize_hs) bound /= hs_normalizer(spec.dims);
      std::vector<std::string> row{std::to_string(d), num(mean), num(se), num(bound)};
      if (with_limit) row.push_back(num(1.0));
      table.add_row(std::move(row));
      est.x.push_back(static_cast<double>(d));
      est.y.push_back(mean);
      bnd.x.push_back(static_cast<double>(d));
      bnd.y.push_back(bound);
      lim.x.push_back(static_cast<double>(d));
      lim.y.push_back(1.0);
    }
    series = with_limit ? std::vector<Series>{est, bnd, lim}
                        : std::vector<Series>{est, bnd};
  }

  RunManifest manifest{"figure",
                       {{"name", a.name},
                        {"p", std::to_string(a.p)},
                        {"method", a.est.method},
                        {"restarts", std::to_string(a.est.restarts)},
                        {"realizations", std::to_string(a.realizations)},
                        {"normalize", a.normalize},
                        {"full", a.full ? "true" : "false"},
                        {"seed", std::to_string(a.seed)}},
                       a.seed,
                       kVersion,
                       timer.seconds()};
  tools::emit_output(a.out, table_or_json(table, a.as_json), manifest);
  if (!a.svg_path.empty()) {
    RunManifest sm = manifest;
    sm.subcommand = "figure-svg";
    tools::emit_output(a.svg_path, tools::render_svg(series, "d", "injective norm"), sm);
  }
  return 0;
}

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& est) {
  cmd->add_option("--method", est.method, "als or pga")
      ->check(CLI::IsMember({"als", "pga"}));
  cmd->add_option("--restarts", est.restarts, "independent restarts")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", est.max_iters, "iteration cap (0 = method default)");
  cmd->add_option("--rel-tol", est.rel_tol, "relative improvement stop");
  cmd->add_option("--step-size", est.step_size, "pga step size");
  cmd->add_option("--noise-initial", est.noise_initial, "pga initial noise");
  cmd->add_option("--noise-decay", est.noise_decay, "pga noise decay in (0,1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment-method bounds and numerical estimates for the injective norm "
               "of random tensors"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  BoundArgs bound_args;
  auto* bound_cmd = app.add_subcommand("bound", "finite moment bound for a model");
  bound_cmd->add_option("--model", bound_args.model, "model name")
      ->check(CLI::IsMember({"a-real", "a-complex", "sym", "sym-tilde", "bounded-rank"}));
  bound_cmd->add_option("--dims", bound_args.dims_text, "d1,d2,...")->required();
  bound_cmd->add_option("--dist", bound_args.dist, "entry distribution");
  bound_cmd->add_option("--rank", bound_args.rank, "rank (bounded-rank model)");
  auto* kopt = bound_cmd->add_option("--k", bound_args.k, "moment order");
  auto* oopt = bound_cmd->add_flag("--optimize-k", bound_args.optimize,
                                   "minimize over the moment order");
  kopt->excludes(oopt);
  bound_cmd->add_option("--out", bound_args.out, "write CSV here");
  bound_cmd->add_flag("--json", bound_args.as_json, "emit JSON instead of CSV");

  AsymptoticArgs asym_args;
  auto* asym_cmd = app.add_subcommand("asymptotic", "large-dimension bound");
  asym_cmd->add_option("--model", asym_args.model, "model name")
      ->check(CLI::IsMember({"a-real", "a-complex", "sym", "sym-tilde", "bounded-rank"}));
  asym_cmd->add_option("--p", asym_args.p, "tensor order")->required();
  asym_cmd->add_option("--eta", asym_args.eta_text, "aspect ratios eta2,...,etap");
  asym_cmd->add_flag("--normalizers", asym_args.normalizers,
                     "append the sqrt(p log p) / sqrt(log p) normalizer column");
  asym_cmd->add_option("--out", asym_args.out, "write CSV here");
  asym_cmd->add_flag("--json", asym_args.as_json, "emit JSON instead of CSV");

  EstimateArgs est_args;
  auto* est_cmd = app.add_subcommand("estimate", "numerical lower-bound estimates");
  est_cmd->add_option("--model", est_args.model, "model name")
      ->check(CLI::IsMember({"a-real", "a-complex", "sym", "sym-tilde", "bounded-rank"}));
  est_cmd->add_option("--dims", est_args.dims_text, "d1,d2,...");
  est_cmd->add_option("--d-grid", est_args.d_grid_text, "cubic d grid d1,d2,...");
  est_cmd->add_option("--p", est_args.p, "tensor order (with --d-grid)");
  est_cmd->add_option("--dist", est_args.dist, "entry distribution");
  est_cmd->add_option("--rank", est_args.rank, "rank (bounded-rank model)");
  est_cmd->add_option("--realizations", est_args.realizations, "fresh tensors to average")
      ->check(CLI::PositiveNumber);
  est_cmd->add_option("--seed", est_args.seed, "master seed");
  est_cmd->add_option("--threads", est_args.threads, "worker threads (0 = all)");
  est_cmd->add_option("--normalize", est_args.normalize, "none or hs");
  est_cmd->add_flag("--bound-column", est_args.bound_column,
                    "append the matching finite bound");
  est_cmd->add_option("--load", est_args.load_path, "estimate a stored tensor");
  est_cmd->add_option("--dump", est_args.dump_path,
                      "store the sampled tensor (realizations = 1)");
  est_cmd->add_option("--trace-csv", est_args.trace_csv, "write per-restart values");
  est_cmd->add_option("--out", est_args.out, "write CSV here");
  est_cmd->add_flag("--json", est_args.as_json, "emit JSON instead of CSV");
  add_estimator_flags(est_cmd, est_args.est);

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo bound verification");
  verify_cmd->add_option("--instances", verify_args.instances, "instance count")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--samples", verify_args.samples, "MC samples per instance")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--slack", verify_args.slack, "MC slack in sigmas");
  verify_cmd->add_option("--dims", verify_args.d, "fix the local dimension");
  verify_cmd->add_option("--p", verify_args.p, "fix the tensor order");
  verify_cmd->add_option("--k", verify_args.k, "fix the moment order");
  verify_cmd->add_option("--restarts", verify_args.restarts, "estimator restarts");
  verify_cmd->add_option("--seed", verify_args.seed, "master seed");
  verify_cmd->add_option("--threads", verify_args.threads, "worker threads (0 = all)");
  verify_cmd->add_flag("--corrupt-prefactor", verify_args.corrupt_prefactor,
                       "negative control: halve the prefactor");
  verify_cmd->add_option("--out", verify_args.out, "write the JSON report here");

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "comparison table of named bounds");
  cmp_cmd->add_option("--regime", cmp_args.regime, "dinf or d=N");
  cmp_cmd->add_option("--p-range", cmp_args.p_range, "a:b");
  cmp_cmd->add_option("--dist", cmp_args.dist, "gauss or rigid");
  cmp_cmd->add_option("--eps", cmp_args.eps, "epsilon parameter");
  cmp_cmd->add_option("--cboed", cmp_args.cboed, "universal constant C >= 1");
  cmp_cmd->add_option("--out", cmp_args.out, "write CSV here");
  cmp_cmd->add_flag("--json", cmp_args.as_json, "emit JSON instead of CSV");

  FigureArgs fig_args;
  auto* fig_cmd = app.add_subcommand("figure", "figure data series (CSV, optional SVG)");
  fig_cmd->add_option("--name", fig_args.name, "steinhaus | bounded-rank-small | bounded-rank-r25")
      ->required();
  fig_cmd->add_option("--p", fig_args.p, "tensor order (required)")->required();
  fig_cmd->add_option("--realizations", fig_args.realizations, "fresh tensors per d")
      ->check(CLI::PositiveNumber);
  fig_cmd->add_option("--seed", fig_args.seed, "master seed");
  fig_cmd->add_option("--threads", fig_args.threads, "worker threads (0 = all)");
  fig_cmd->add_option("--normalize", fig_args.normalize, "none or hs");
  fig_cmd->add_flag("--full", fig_args.full, "full-paper d grid (slow)");
  fig_cmd->add_option("--out", fig_args.out, "write CSV here");
  fig_cmd->add_option("--svg", fig_args.svg_path, "also render an SVG plot");
  fig_cmd->add_flag("--json", fig_args.as_json, "emit JSON instead of CSV");
  add_estimator_flags(fig_cmd, fig_args.est);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "injnorm: " << e.what() << '\n';
    return 2;
  }

  try {
    if (bound_cmd->parsed()) return run_bound(bound_args);
    if (asym_cmd->parsed()) return run_asymptotic(asym_args);
    if (est_cmd->parsed()) return run_estimate(est_args);
    if (verify_cmd->parsed()) return run_verify(verify_args);
    if (cmp_cmd->parsed()) return run_compare(cmp_args);
    if (fig_cmd->parsed()) return run_figure(fig_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "injnorm: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "injnorm: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
