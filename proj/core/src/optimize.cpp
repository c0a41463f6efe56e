#include "injnorm/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "injnorm/ensembles.hpp"

namespace injnorm {

EstimatorConfig default_pga_config() {
  EstimatorConfig config;
  config.method = EstimateMethod::pga;
  config.max_iters = 2000;
  return config;
}

namespace {

Cplx paired_overlap(std::span<const Cplx> w, std::span<const Cplx> x) {
  Cplx s{0.0, 0.0};
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
  return s;
}

void conj_normalized(std::span<const Cplx> w, double norm, std::vector<Cplx>& out) {
  out.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = std::conj(w[j]) / norm;
}

std::vector<Cplx> noise_vector(std::size_t d, Field field, double sigma,
                               CounterRng& rng) {
  std::vector<Cplx> xi(d);
  for (std::size_t j = 0; j < d; ++j) {
    xi[j] = (field == Field::real) ? Cplx{sigma * rng.next_gaussian(), 0.0}
                                   : sigma * rng.next_complex_gaussian();
  }
  return xi;
}

EstimateResult zero_tensor_result(const DenseTensor& t, CounterRng& rng) {
  EstimateResult res;
  res.value = 0.0;
  res.factors = sample_unit_factor_tuple(t.shape(), t.field(), rng);
  res.converged = true;
  res.restart_values = {0.0};
  return res;
}

FactorTuple replicate(const std::vector<Cplx>& x, std::size_t p, Field field) {
  FactorTuple tuple{field, {}};
  tuple.factors.assign(p, x);
  return tuple;
}

}  // namespace

EstimateResult als_estimate(const DenseTensor& t, const EstimatorConfig& config) {
  if (config.max_iters < 1) throw std::invalid_argument("als: max_iters >= 1");
  CounterRng rng(config.seed);
  if (frobenius_norm(t) == 0.0) return zero_tensor_result(t, rng);

  const std::size_t p = t.order();
  EstimateResult res;
  res.factors = sample_unit_factor_tuple(t.shape(), t.field(), rng);

  double obj = std::abs(rank_one_overlap(t, res.factors));
  for (long long sweep = 1; sweep <= config.max_iters; ++sweep) {
    bool degenerate = false;
    double last_norm = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const std::vector<Cplx> w = partial_contraction(t, res.factors, i);
      const double nw = vector_norm(w);
      if (nw == 0.0) {
        // measure-zero contraction collapse: reseed this slot and go on
        res.factors.factors[i] =
            sample_uniform_sphere(t.shape()[i], t.field(), rng);
        degenerate = true;
        continue;
      }
      conj_normalized(w, nw, res.factors.factors[i]);
      last_norm = nw;
      res.objective_trace.push_back(nw);
    }
    const double new_obj =
        degenerate ? std::abs(rank_one_overlap(t, res.factors)) : last_norm;
    res.iterations_used = sweep;
    if (!degenerate && new_obj - obj <= config.rel_tol * std::max(1.0, new_obj)) {
      res.converged = true;
      break;
    }
    obj = new_obj;
  }
  res.value = std::abs(rank_one_overlap(t, res.factors));
  res.restart_values = {res.value};
  return res;
}

EstimateResult pga_estimate(const DenseTensor& t, const EstimatorConfig& config) {
  if (config.max_iters < 1) throw std::invalid_argument("pga: max_iters >= 1");
  CounterRng rng(config.seed);
  if (frobenius_norm(t) == 0.0) return zero_tensor_result(t, rng);

  const std::size_t p = t.order();
  EstimateResult res;
  FactorTuple x = sample_unit_factor_tuple(t.shape(), t.field(), rng);
  double best = std::abs(rank_one_overlap(t, x));
  FactorTuple x_best = x;

  std::vector<Cplx> cand;
  for (long long it = 0; it < config.max_iters; ++it) {
    const double sigma = config.noise_initial * std::pow(config.noise_decay, it);
    const double best_before = best;
    for (std::size_t i = 0; i < p; ++i) {
      const std::vector<Cplx> w = partial_contraction(t, x, i);
      const double nw = vector_norm(w);
      if (nw == 0.0) {
        x.factors[i] = sample_uniform_sphere(t.shape()[i], t.field(), rng);
        continue;
      }
      const Cplx s = paired_overlap(w, x.factors[i]);
      const Cplx phase = (s == Cplx{0.0, 0.0}) ? Cplx{1.0, 0.0} : s / std::abs(s);
      const std::size_t d = t.shape()[i];
      const std::vector<Cplx> xi = noise_vector(d, t.field(), sigma, rng);
      cand.resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        cand[j] = x.factors[i][j] + config.step_size * std::conj(w[j]) * phase + xi[j];
      }
      const double cn = vector_norm(cand);
      if (cn == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) x.factors[i][j] = cand[j] / cn;
    }
    const double obj = std::abs(rank_one_overlap(t, x));
    res.objective_trace.push_back(obj);
    res.iterations_used = it + 1;
    if (obj > best) {
      best = obj;
      x_best = x;
    }
    // The noise floor must decay below the tolerance before the ALS-style
    // improvement test is meaningful.
    if (sigma <= config.rel_tol * std::max(1.0, best) &&
        best - best_before <= config.rel_tol * std::max(1.0, best)) {
      res.converged = true;
      break;
    }
  }
  res.factors = std::move(x_best);
  res.value = std::abs(rank_one_overlap(t, res.factors));
  res.restart_values = {res.value};
  return res;
}

EstimateResult symmetric_estimate(const DenseTensor& t,
                                  const EstimatorConfig& config) {
  if (!is_symmetric(t, 1e-9)) {
    throw std::invalid_argument("symmetric_estimate: tensor is not symmetric");
  }
  CounterRng rng(config.seed);
  if (frobenius_norm(t) == 0.0) return zero_tensor_result(t, rng);

  const std::size_t p = t.order();
  const std::size_t d = t.shape()[0];
  std::vector<Cplx> x = sample_uniform_sphere(d, t.field(), rng);

  const auto objective = [&](const std::vector<Cplx>& v) {
    return std::abs(rank_one_overlap(t, replicate(v, p, t.field())));
  };

  EstimateResult res;
  std::vector<Cplx> cand, raw;

  if (config.method == EstimateMethod::pga) {
    double best = objective(x);
    std::vector<Cplx> x_best = x;
    for (long long it = 0; it < config.max_iters; ++it) {
      const double sigma = config.noise_initial * std::pow(config.noise_decay, it);
      const double best_before = best;
      const std::vector<Cplx> w =
          partial_contraction(t, replicate(x, p, t.field()), 0);
      const double nw = vector_norm(w);
      res.iterations_used = it + 1;
      if (nw == 0.0) {
        x = sample_uniform_sphere(d, t.field(), rng);
        continue;
      }
      const Cplx s = paired_overlap(w, x);
      const Cplx phase = (s == Cplx{0.0, 0.0}) ? Cplx{1.0, 0.0} : s / std::abs(s);
      const std::vector<Cplx> xi = noise_vector(d, t.field(), sigma, rng);
      cand.resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        cand[j] = x[j] + config.step_size * std::conj(w[j]) * phase + xi[j];
      }
      const double cn = vector_norm(cand);
      if (cn == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) cand[j] /= cn;
      x = cand;
      const double obj = objective(x);
      res.objective_trace.push_back(obj);
      if (obj > best) {
        best = obj;
        x_best = x;
      }
      if (sigma <= config.rel_tol * std::max(1.0, best) &&
          best - best_before <= config.rel_tol * std::max(1.0, best)) {
        res.converged = true;
        break;
      }
    }
    res.factors = replicate(x_best, p, t.field());
    res.value = std::abs(rank_one_overlap(t, res.factors));
    res.restart_values = {res.value};
    return res;
  }

  double f = objective(x);
  for (long long it = 1; it <= config.max_iters; ++it) {
    const std::vector<Cplx> w = partial_contraction(t, replicate(x, p, t.field()), 0);
    const double nw = vector_norm(w);
    res.iterations_used = it;
    if (nw == 0.0) {
      x = sample_uniform_sphere(d, t.field(), rng);
      f = objective(x);
      continue;
    }
    double f_new;
    conj_normalized(w, nw, raw);
    const double f_raw = objective(raw);
    if (f_raw >= f - 1e-15) {
      x = raw;
      f_new = f_raw;
    } else {
      // Raw power step lost ground; backtrack along the ascent direction.
      const Cplx s = paired_overlap(w, x);
      const Cplx phase = (s == Cplx{0.0, 0.0}) ? Cplx{1.0, 0.0} : s / std::abs(s);
      double gamma = 1.0;
      bool accepted = false;
      cand.resize(d);
      while (gamma >= 1e-10) {
        for (std::size_t j = 0; j < d; ++j) {
          cand[j] = x[j] + gamma * std::conj(w[j]) * phase;
        }
        const double cn = vector_norm(cand);
        if (cn > 0.0) {
          for (std::size_t j = 0; j < d; ++j) cand[j] /= cn;
          const double fc = objective(cand);
          if (fc >= f) {
            x = cand;
            f_new = fc;
            accepted = true;
            break;
          }
        }
        gamma *= 0.5;
      }
      if (!accepted) {  // critical point
        res.converged = true;
        break;
      }
    }
    res.objective_trace.push_back(f_new);
    if (f_new - f <= config.rel_tol * std::max(1.0, f_new) && it > 1) {
      f = f_new;
      res.converged = true;
      break;
    }
    f = f_new;
  }
  res.factors = replicate(x, p, t.field());
  res.value = std::abs(rank_one_overlap(t, res.factors));
  res.restart_values = {res.value};
  return res;
}

EstimateResult multi_restart(const DenseTensor& t, const EstimatorConfig& config) {
  if (config.restarts < 1) throw std::invalid_argument("multi_restart: restarts >= 1");
  const auto run_one = [&](const EstimatorConfig& cfg) {
    if (cfg.symmetric) return symmetric_estimate(t, cfg);
    return cfg.method == EstimateMethod::als ? als_estimate(t, cfg)
                                             : pga_estimate(t, cfg);
  };

  EstimateResult best;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(config.restarts));
  for (long long r = 0; r < config.restarts; ++r) {
    EstimatorConfig cfg = config;
    // restart 0 reuses the caller's stream so restarts=1 matches a plain run
    if (r > 0) cfg.seed = substream(config.seed, static_cast<std::uint64_t>(r));
    EstimateResult res = run_one(cfg);
    values.push_back(res.value);
    if (r == 0 || res.value > best.value) best = std::move(res);
  }
  best.restart_values = std::move(values);
  return best;
}

double matrix_oracle(const DenseTensor& t) {
  if (t.order() != 2) throw std::invalid_argument("matrix_oracle: requires p = 2");
  const std::size_t d1 = t.shape()[0], d2 = t.shape()[1];
  if (frobenius_norm(t) == 0.0) return 0.0;

  // power iteration on the Gram map v -> A^dag (A v), A = conj(T)
  CounterRng rng(SeedSpec{0x6f7261636c65ULL, 0});
  std::vector<Cplx> v = sample_uniform_sphere(d2, t.field(), rng);
  std::vector<Cplx> av(d1), atav(d2);
  double sigma = 0.0;
  int stable = 0;
  for (int it = 0; it < 200000; ++it) {
    for (std::size_t i = 0; i < d1; ++i) {
      Cplx s{0.0, 0.0};
      const Cplx* row = t.data().data() + i * d2;
      for (std::size_t j = 0; j < d2; ++j) s += std::conj(row[j]) * v[j];
      av[i] = s;
    }
    const double new_sigma = vector_norm(av);
    if (new_sigma == 0.0) {  // restart away from the kernel
      v = sample_uniform_sphere(d2, t.field(), rng);
      continue;
    }
    for (std::size_t j = 0; j < d2; ++j) {
      Cplx s{0.0, 0.0};
      for (std::size_t i = 0; i < d1; ++i) s += t[i * d2 + j] * av[i];
      atav[j] = s;
    }
    v = atav;
    normalize(v);
    if (std::abs(new_sigma - sigma) <= 1e-13 * std::max(1.0, new_sigma)) {
      if (++stable >= 3) return new_sigma;
    } else {
      stable = 0;
    }
    sigma = new_sigma;
  }
  return sigma;
}

}  // namespace injnorm
