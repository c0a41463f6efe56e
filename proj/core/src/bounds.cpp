#include "injnorm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "injnorm/specialfn.hpp"

namespace injnorm {

namespace {

double log_dim_product(std::span<const std::size_t> dims) {
  double s = 0.0;
  for (std::size_t d : dims) s += std::log(static_cast<double>(d));
  return s;
}

bool all_cubic(std::span<const std::size_t> dims) {
  return std::all_of(dims.begin(), dims.end(),
                     [&](std::size_t d) { return d == dims.front(); });
}

}  // namespace

double prefactor_log(PrefactorKind kind, std::span<const std::size_t> dims,
                     long long k) {
  if (k < 1) throw std::invalid_argument("prefactor_log: k must be >= 1");
  if (dims.empty()) throw std::invalid_argument("prefactor_log: dims empty");
  const double kk = static_cast<double>(k);
  switch (kind) {
    case PrefactorKind::real_asym: {
      double s = 0.0;
      const double ldfo = log_double_factorial_odd(k);
      for (std::size_t d : dims) {
        const double half = 0.5 * static_cast<double>(d);
        s += kk * std::log(2.0) + log_gamma(half + kk) - log_gamma(half) - ldfo;
      }
      return s;
    }
    case PrefactorKind::complex_asym: {
      double s = 0.0;
      for (std::size_t d : dims) {
        s += log_binomial(static_cast<long long>(d) + k - 1, k);
      }
      return s;
    }
    case PrefactorKind::complex_sym: {
      if (!all_cubic(dims)) {
        throw std::invalid_argument("prefactor_log: symmetric variant needs cubic dims");
      }
      const long long d = static_cast<long long>(dims.front());
      const long long pk = static_cast<long long>(dims.size()) * k;
      return log_binomial(d + pk - 1, pk);
    }
  }
  throw std::invalid_argument("prefactor_log: unknown kind");
}

PrefactorKind prefactor_for(const ModelSpec& spec) {
  switch (spec.family) {
    case ModelFamily::a:
      return spec.field == Field::real ? PrefactorKind::real_asym
                                       : PrefactorKind::complex_asym;
    case ModelFamily::s:
    case ModelFamily::s_tilde:
      return PrefactorKind::complex_sym;
    case ModelFamily::b:
      return PrefactorKind::complex_asym;
  }
  throw std::invalid_argument("prefactor_for: unknown family");
}

CompositionTable::CompositionTable(std::size_t rank, long long k_max, long long p)
    : rank_(rank), k_max_(k_max), p_(p) {
  if (rank < 1) throw std::invalid_argument("CompositionTable: rank must be >= 1");
  if (k_max < 0) throw std::invalid_argument("CompositionTable: k_max must be >= 0");
  if (p < 3) {
    throw std::invalid_argument("CompositionTable: requires p >= 3 (exponent p-2 >= 1)");
  }
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const std::size_t n = static_cast<std::size_t>(k_max) + 1;

  std::vector<double> fact(n);  // (m!)^(p-2) in log
  for (std::size_t m = 0; m < n; ++m) {
    fact[m] = static_cast<double>(p - 2) * log_gamma(static_cast<double>(m) + 1.0);
  }
  std::vector<double> cur(n, neg_inf), terms;
  cur[0] = 0.0;
  for (std::size_t r = 0; r < rank; ++r) {
    std::vector<double> next(n, neg_inf);
    for (std::size_t j = 0; j < n; ++j) {
      terms.clear();
      for (std::size_t m = 0; m <= j; ++m) {
        if (cur[j - m] != neg_inf) terms.push_back(fact[m] + cur[j - m]);
      }
      if (!terms.empty()) next[j] = log_sum_exp(terms);
    }
    cur = std::move(next);
  }
  log_s_ = std::move(cur);
}

double CompositionTable::log_sum(long long k) const {
  if (k < 0 || k > k_max_) {
    throw std::out_of_range("CompositionTable: k outside covered range");
  }
  return log_s_[static_cast<std::size_t>(k)];
}

double composition_sum_log(std::size_t rank, long long k, long long p) {
  return CompositionTable(rank, k, p).log_sum(k);
}

double moment_log_upper(const ModelSpec& spec, long long k) {
  return moment_log_upper(spec, k, nullptr);
}

double moment_log_upper(const ModelSpec& spec, long long k,
                        const CompositionTable* table) {
  validate(spec);
  if (k < 1) throw std::invalid_argument("moment_log_upper: k must be >= 1");
  const double kk = static_cast<double>(k);
  const double p = static_cast<double>(spec.dims.size());
  switch (spec.family) {
    case ModelFamily::a: {
      const double base = -kk / p * log_dim_product(spec.dims);
      return (spec.field == Field::complex ? log_gamma(kk + 1.0)
                                           : log_double_factorial_odd(k)) +
             base;
    }
    case ModelFamily::s:
    case ModelFamily::s_tilde:
      return log_gamma(kk + 1.0) -
             kk * std::log(static_cast<double>(spec.dims.front()));
    case ModelFamily::b: {
      const double comp = table != nullptr
                              ? table->log_sum(k)
                              : composition_sum_log(spec.rank, k,
                                                    static_cast<long long>(spec.dims.size()));
      return 2.0 * log_gamma(kk + 1.0) + comp -
             p * kk * std::log(static_cast<double>(spec.dims.front()));
    }
  }
  throw std::invalid_argument("moment_log_upper: unknown family");
}

namespace {

double finite_log_value(const ModelSpec& spec, long long k,
                        const CompositionTable* table) {
  const double pref = prefactor_log(prefactor_for(spec), spec.dims, k);
  const double mom = moment_log_upper(spec, k, table);
  return (pref + mom) / (2.0 * static_cast<double>(k));
}

}  // namespace

BoundResult finite_bound(const BoundQuery& query) {
  if (!query.k.has_value()) {
    throw std::invalid_argument("finite_bound: k must be set (use optimal_k)");
  }
  const double lv = finite_log_value(query.spec, *query.k, nullptr);
  return BoundResult{lv, std::exp(lv), query.k, BoundKind::finite_moment, 1};
}

long long coarse_k_upper(std::span<const std::size_t> dims) {
  const double p = static_cast<double>(dims.size());
  const double d = static_cast<double>(*std::max_element(dims.begin(), dims.end()));
  const double pd = p * d;
  return static_cast<long long>(std::ceil(2.0 * pd * std::log(pd))) + 1;
}

long long lambert_k_upper(std::size_t d, std::size_t p) {
  const double s = static_cast<double>(p) * (static_cast<double>(d) - 1.0) - 1.5;
  if (s < 1.5) throw std::invalid_argument("lambert_k_upper: requires p(d-1) - 3/2 >= 3/2");
  const double arg = -std::exp((s - 1.0) / (2.0 + s)) / (2.0 + s);
  const double w_plus = -(2.0 + s) * lambert_w(LambertBranch::lower, arg);
  return static_cast<long long>(std::ceil(w_plus));
}

BoundResult optimal_k(const BoundQuery& query) {
  if (query.k.has_value()) return finite_bound(query);
  const ModelSpec& spec = query.spec;
  validate(spec);

  const std::size_t p = spec.dims.size();
  const std::size_t d = spec.dims.front();
  const bool bisectable = spec.family == ModelFamily::a &&
                          spec.field == Field::complex && all_cubic(spec.dims) &&
                          d >= 2 && p >= 3;

  long long evals = 0;
  std::unordered_map<long long, double> cache;
  std::unique_ptr<CompositionTable> table;
  long long table_k_max = 0;
  const auto ensure_table = [&](long long k_needed) {
    if (spec.family != ModelFamily::b) return;
    if (table && k_needed <= table_k_max) return;
    table_k_max = std::max<long long>(k_needed, 2 * std::max<long long>(table_k_max, 1));
    table = std::make_unique<CompositionTable>(spec.rank, table_k_max,
                                               static_cast<long long>(p));
  };
  const auto value_at = [&](long long k) {
    const auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    ensure_table(k);
    const double v = finite_log_value(spec, k, table.get());
    ++evals;
    cache.emplace(k, v);
    return v;
  };

  long long argmin = 1;
  if (bisectable) {
    const long long k_upper =
        std::min(coarse_k_upper(spec.dims), lambert_k_upper(d, p));
    // Smallest k with a nonnegative forward difference; ties go to smaller k.
    long long lo = 1, hi = k_upper;
    while (lo < hi) {
      const long long mid = lo + (hi - lo) / 2;
      if (value_at(mid + 1) - value_at(mid) >= 0.0) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    argmin = lo;
  } else {
    constexpr long long kHardCap = 100000;
    long long k_upper = coarse_k_upper(spec.dims);
    long long best_k = 1;
    double best = value_at(1);
    long long k = 2;
    while (true) {
      for (; k <= k_upper; ++k) {
        const double v = value_at(k);
        if (v < best) {
          best = v;
          best_k = k;
        }
      }
      if (k_upper >= kHardCap) {
        std::cerr << "optimal_k: scan capped at k = " << kHardCap
                  << "; result may not be the global minimum\n";
        break;
      }
      // Extend while the boundary is still strictly decreasing.
      if (k_upper >= 3 && value_at(k_upper) < value_at(k_upper - 1) &&
          value_at(k_upper - 1) < value_at(k_upper - 2)) {
        k_upper = std::min(2 * k_upper, kHardCap);
      } else {
        break;
      }
    }
    argmin = best_k;
  }

  const double lv = value_at(argmin);
  return BoundResult{lv, std::exp(lv), argmin, BoundKind::finite_moment,
                     std::max<long long>(evals, 1)};
}

namespace {

// (1+x) ln(1+x) - (1+x) ln x  ==  (1+x) ln(1 + 1/x)
double head_term(double x) { return (1.0 + x) * std::log1p(1.0 / x); }

// (1+x) ln(1+x) - x ln x  ==  x ln(1 + 1/x) + ln(1 + x)
double tail_term(double x) { return x * std::log1p(1.0 / x) + std::log1p(x); }

}  // namespace

double psi_log(Field field, double alpha, std::span<const double> eta) {
  if (!(alpha > 0.0)) throw std::invalid_argument("psi: alpha must be positive");
  for (double e : eta) {
    if (!(e > 0.0)) throw std::invalid_argument("psi: eta entries must be positive");
  }
  const double p = static_cast<double>(eta.size() + 1);
  double log_eta = 0.0;
  for (double e : eta) log_eta += std::log(e);

  double s = -0.5 - log_eta / (2.0 * p);
  if (field == Field::complex) {
    s += 0.5 * head_term(alpha);
    for (double e : eta) s += 0.5 * tail_term(alpha * e);
  } else {
    s += 0.5 * head_term(0.5 * alpha);
    for (double e : eta) s += 0.5 * tail_term(0.5 * alpha * e);
  }
  return s;
}

double psi(Field field, double alpha, std::span<const double> eta) {
  return std::exp(psi_log(field, alpha, eta));
}

double alpha0(AlphaKind kind, long long p) {
  if (p < 2) throw std::invalid_argument("alpha0: p must be >= 2");
  const double pp = static_cast<double>(p);
  const auto f = [&](double a) {
    switch (kind) {
      case AlphaKind::real:
        return a * std::log1p(2.0 / a) - 2.0 / pp;
      case AlphaKind::complex:
        return a * std::log1p(1.0 / a) - 1.0 / pp;
      case AlphaKind::symmetric:
        return a * std::log1p(pp / a) - 1.0;
    }
    return 0.0;
  };
  // f is strictly increasing with a sign change inside this bracket.
  double lo = 1e-12, hi = std::max(10.0, 10.0 * pp);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double phi_log(double alpha, long long p) {
  if (!(alpha > 0.0)) throw std::invalid_argument("phi: alpha must be positive");
  if (p < 2) throw std::invalid_argument("phi: p must be >= 2");
  const double pp = static_cast<double>(p);
  return -0.5 * pp * std::log(pp) - 0.5 + 0.5 * alpha * std::log1p(pp / alpha) +
         0.5 * pp * std::log(pp + alpha) - 0.5 * std::log(alpha);
}

double phi(double alpha, long long p) { return std::exp(phi_log(alpha, p)); }

namespace {

// Golden-section minimum of fn over [lo, hi] (in the log-alpha coordinate).
std::pair<double, double> golden_min(const std::function<double(double)>& fn,
                                     double lo, double hi, int iters,
                                     long long& evals) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  evals += 2;
  for (int it = 0; it < iters; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = fn(x2);
    }
    ++evals;
  }
  const double xm = 0.5 * (a + b);
  evals += 1;
  return {xm, fn(xm)};
}

}  // namespace

AsymptoticResult asymptotic_bound(const AsymptoticQuery& query) {
  if (query.p < 2) throw std::invalid_argument("asymptotic_bound: p must be >= 2");
  AsymptoticResult out;
  out.bound.kind = BoundKind::asymptotic;

  switch (query.family) {
    case ModelFamily::b: {
      out.bound.log_value = 0.0;
      out.bound.value = 1.0;
      out.bound.evaluations = 1;
      return out;
    }
    case ModelFamily::s:
    case ModelFamily::s_tilde: {
      const double a0 = alpha0(AlphaKind::symmetric, query.p);
      out.alpha_min = a0;
      out.bound.log_value = phi_log(a0, query.p);
      out.bound.value = std::exp(out.bound.log_value);
      out.bound.evaluations = 1;
      return out;
    }
    case ModelFamily::a: {
      // Explicit eta always runs the search; omitted eta takes the cubic
      // closed form through alpha0.
      if (query.eta.empty()) {
        const double a0 = alpha0(query.field == Field::real ? AlphaKind::real
                                                            : AlphaKind::complex,
                                 query.p);
        std::vector<double> ones(static_cast<std::size_t>(query.p - 1), 1.0);
        out.alpha_min = a0;
        out.bound.log_value = psi_log(query.field, a0, ones);
        out.bound.value = std::exp(out.bound.log_value);
        out.bound.evaluations = 1;
        return out;
      }
      if (static_cast<long long>(query.eta.size()) != query.p - 1) {
        throw std::invalid_argument("asymptotic_bound: eta needs p-1 entries");
      }
      // Seed the search at the cubic minimizer and minimize over log(alpha).
      const double a0 = alpha0(query.field == Field::real ? AlphaKind::real
                                                          : AlphaKind::complex,
                               query.p);
      long long evals = 0;
      const auto fn = [&](double t) {
        return psi_log(query.field, std::exp(t), query.eta);
      };
      const auto [tm, fm] =
          golden_min(fn, std::log(a0) - 10.0, std::log(a0) + 10.0, 120, evals);
      out.alpha_min = std::exp(tm);
      out.bound.log_value = fm;
      out.bound.value = std::exp(fm);
      out.bound.evaluations = evals;
      return out;
    }
  }
  throw std::invalid_argument("asymptotic_bound: unsupported query");
}

namespace {

const double kKacRiceReference[6] = {2.87, 3.59, 4.22, 4.80, 5.33, 5.83};

}  // namespace

std::vector<ComparisonEntry> comparison_bounds(std::optional<std::size_t> d,
                                               long long p,
                                               const ComparisonParams& params) {
  if (p < 2) throw std::invalid_argument("comparison_bounds: p must be >= 2");
  if (params.boedihardjo_c < 1.0) {
    throw std::invalid_argument("comparison_bounds: C must be >= 1");
  }
  if (params.epsilon < 0.0) {
    throw std::invalid_argument("comparison_bounds: epsilon must be >= 0");
  }
  const double pp = static_cast<double>(p);
  std::vector<ComparisonEntry> rows;

  // Kac--Rice ground-state reference values (d -> inf, Gaussian only).
  {
    ComparisonEntry row{"kac-rice-ref", std::nullopt, "reference -- not computed"};
    if (!d.has_value() && params.gaussian && p >= 3 && p <= 8) {
      row.value = kKacRiceReference[p - 3];
    }
    rows.push_back(row);
  }

  // Moment bound: applies to every rigidly sub-Gaussian model.
  {
    ComparisonEntry row{"moment", std::nullopt, ""};
    if (!d.has_value()) {
      std::vector<double> ones(static_cast<std::size_t>(p - 1), 1.0);
      row.value = psi(Field::real, alpha0(AlphaKind::real, p), ones);
    } else {
      ModelSpec spec;
      spec.family = ModelFamily::a;
      spec.field = Field::real;
      spec.dims.assign(static_cast<std::size_t>(p), *d);
      spec.dist = {DistKind::gaussian_real, 1.0};
      row.value = optimal_k(BoundQuery{spec, std::nullopt, {}}).value;
    }
    rows.push_back(row);
  }

  // Sudakov--Fernique: Gaussian comparison process, cubic value is p.
  rows.push_back(ComparisonEntry{
      "sudakov-fernique",
      params.gaussian ? std::optional<double>(pp) : std::nullopt,
      "gaussian only"});

  // Aden-Ali: sub-Gaussian allowed; cubic value is d-independent,
  // p * sqrt(1 + max_l C(p,l)^{1/l}).
  {
    double best = 0.0;
    for (long long l = 2; l <= p; ++l) {
      best = std::max(best, std::exp(log_binomial(p, l) / static_cast<double>(l)));
    }
    rows.push_back(ComparisonEntry{"aden-ali", pp * std::sqrt(1.0 + best), ""});
  }

  // Boedihardjo: Gaussian-only; the d-dependent term vanishes as d -> inf.
  {
    ComparisonEntry row{"boedihardjo", std::nullopt, "parameterized (C)"};
    if (params.gaussian) {
      double v = std::numbers::sqrt2 * std::pow(pp, 1.5);
      if (d.has_value()) {
        const double dd = static_cast<double>(*d);
        const double ld = std::log(dd);
        v += params.boedihardjo_c * pp * pp * pp * ld * ld / std::sqrt(dd);
      }
      row.value = v;
    }
    rows.push_back(row);
  }

  // Friedland--Kemp: Gaussian symmetric model, normalized state, fixed d.
  {
    ComparisonEntry row{"friedland-kemp", std::nullopt,
                        "normalized symmetric state"};
    if (d.has_value() && *d >= 2 && p >= 3 && params.gaussian) {
      const double dd = static_cast<double>(*d);
      const double lv = 0.5 * (std::log(2.0) + std::log(dd + 1.0)) +
                        0.5 * (log_gamma(dd) + std::log(dd - 1.0) +
                               std::log(std::log(pp)) - (dd - 1.0) * std::log(pp)) +
                        std::log1p(params.epsilon);
      row.value = std::exp(lv);
    }
    rows.push_back(row);
  }

  return rows;
}

}  // namespace injnorm
