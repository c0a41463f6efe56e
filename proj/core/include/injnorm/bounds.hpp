#ifndef INJNORM_BOUNDS_HPP
#define INJNORM_BOUNDS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "injnorm/ensembles.hpp"

namespace injnorm {

/// Which moment-method prefactor applies:
///  - real_asym:   prod_i 2^k Gamma(d_i/2 + k) / ((2k-1)!! Gamma(d_i/2))
///  - complex_asym: prod_i C(d_i + k - 1, k)
///  - complex_sym:  C(d + p k - 1, p k), cubic dims only
enum class PrefactorKind { real_asym, complex_asym, complex_sym };

double prefactor_log(PrefactorKind kind, std::span<const std::size_t> dims,
                     long long k);

PrefactorKind prefactor_for(const ModelSpec& spec);

/// ln sum over a in N^R with sum(a) = k of prod_s (a_s!)^(p-2), evaluated
/// by the log-space recurrence S_r(j) = sum_m (m!)^(p-2) S_{r-1}(j-m).
/// Requires p >= 3. Built once per (rank, k_max, p); O(R k^2) time.
class CompositionTable {
 public:
  CompositionTable(std::size_t rank, long long k_max, long long p);
  double log_sum(long long k) const;
  std::size_t rank() const { return rank_; }
  long long k_max() const { return k_max_; }
  long long p() const { return p_; }

 private:
  std::size_t rank_;
  long long k_max_;
  long long p_;
  std::vector<double> log_s_;
};

double composition_sum_log(std::size_t rank, long long k, long long p);

/// ln of the model's upper bound on the unit-vector moment
/// E |<T, u_1 (x) ... (x) u_p>|^{2k}:
///   family a (complex): k! / (prod d_i)^{k/p}
///   family a (real):    (2k-1)!! / (prod d_i)^{k/p}
///   family s / s~:      k! / d^k
///   family b:           (k!)^2 * composition sum / d^{pk}
double moment_log_upper(const ModelSpec& spec, long long k);
double moment_log_upper(const ModelSpec& spec, long long k,
                        const CompositionTable* table);

struct BoundQuery {
  ModelSpec spec;
  std::optional<long long> k;  // absent => optimize over k
  std::vector<double> eta;     // aspect ratios for asymptotic queries
};

enum class BoundKind { finite_moment, asymptotic, comparison };

struct BoundResult {
  double log_value = 0.0;
  double value = 0.0;
  std::optional<long long> k_used;
  BoundKind kind = BoundKind::finite_moment;
  long long evaluations = 1;  // bound-function calls consumed
};

/// Upper bound on E||T||_inj at a fixed moment order:
/// exp[(prefactor_log + moment_log_upper) / (2k)].
BoundResult finite_bound(const BoundQuery& query);

/// Coarse admissible range ceil(2 p d ln(p d)) + 1 (d = max dimension).
long long coarse_k_upper(std::span<const std::size_t> dims);

/// Tighter range for the complex cubic asymmetric case, from the lower
/// Lambert branch: w+ = -(2+s) W_{-1}(-exp((s-1)/(2+s))/(2+s)),
/// s = p(d-1) - 3/2; valid when s >= 3/2.
long long lambert_k_upper(std::size_t d, std::size_t p);

/// min over integer k >= 1 of finite_bound. Complex cubic family-a queries
/// use discrete bisection on the forward difference (the sequence has a
/// single local minimum there); everything else scans the coarse range,
/// extending geometrically while still strictly decreasing at the boundary.
BoundResult optimal_k(const BoundQuery& query);

/// Scaled bound profile for the asymmetric family as the dimensions grow
/// with fixed ratios eta (eta_1 = 1 implied, so eta has p-1 entries).
double psi_log(Field field, double alpha, std::span<const double> eta);
double psi(Field field, double alpha, std::span<const double> eta);

enum class AlphaKind { real, complex, symmetric };

/// Unique positive root of the minimizer equation:
///   complex:   a ln(1 + 1/a) = 1/p
///   real:      a ln(1 + 2/a) = 2/p
///   symmetric: a ln(1 + p/a) = 1
double alpha0(AlphaKind kind, long long p);

/// Symmetric-family profile; minimized at alpha0(symmetric, p).
double phi_log(double alpha, long long p);
double phi(double alpha, long long p);

struct AsymptoticQuery {
  ModelFamily family = ModelFamily::a;
  Field field = Field::real;
  long long p = 3;
  std::vector<double> eta;  // p-1 entries; empty means cubic
};

struct AsymptoticResult {
  BoundResult bound;
  double alpha_min = 0.0;  // minimizing alpha (0 when not applicable)
};

/// Large-dimension limit of the bound: psi at alpha0 for cubic family a,
/// a golden-section minimum of psi for general eta, phi at alpha0 for the
/// symmetric families, exactly 1 for family b.
AsymptoticResult asymptotic_bound(const AsymptoticQuery& query);

struct ComparisonParams {
  double epsilon = 0.0;        // (1 + epsilon) factor where a lemma carries one
  double boedihardjo_c = 1.0;  // unknown universal constant, parameterized
  bool gaussian = true;        // false: general rigidly sub-Gaussian entries
};

struct ComparisonEntry {
  std::string name;
  std::optional<double> value;  // nullopt renders as "---"
  std::string note;
};

/// Named comparison bounds at cubic dims; d == nullopt means the d -> inf
/// regime. Out-of-domain rows are flagged, not fatal.
std::vector<ComparisonEntry> comparison_bounds(std::optional<std::size_t> d,
                                               long long p,
                                               const ComparisonParams& params);

}  // namespace injnorm

#endif  // INJNORM_BOUNDS_HPP
