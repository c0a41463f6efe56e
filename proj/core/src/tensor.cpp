#include "injnorm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace injnorm {

DenseTensor::DenseTensor(Field field, std::vector<std::size_t> shape)
    : field_(field), shape_(std::move(shape)) {
  if (shape_.empty()) {
    throw std::invalid_argument("DenseTensor: shape must have at least one mode");
  }
  std::size_t n = 1;
  for (std::size_t d : shape_) {
    if (d == 0) throw std::invalid_argument("DenseTensor: zero dimension");
    if (d > kMaxEntries / n) {
      throw std::length_error("DenseTensor: entry count exceeds capacity");
    }
    n *= d;
  }
  if (n > kMaxEntries) {
    throw std::length_error("DenseTensor: entry count exceeds capacity");
  }
  strides_.assign(shape_.size(), 1);
  for (std::size_t i = shape_.size() - 1; i-- > 0;) {
    strides_[i] = strides_[i + 1] * shape_[i + 1];
  }
  data_.assign(n, Cplx{0.0, 0.0});
}

bool DenseTensor::cubic() const {
  return std::all_of(shape_.begin(), shape_.end(),
                     [&](std::size_t d) { return d == shape_.front(); });
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < shape_.size(); ++i) flat += idx[i] * strides_[i];
  return flat;
}

void DenseTensor::multi_index(std::size_t flat, std::span<std::size_t> idx) const {
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    idx[i] = flat / strides_[i];
    flat %= strides_[i];
  }
}

namespace {

void check_compatible(const DenseTensor& t, const FactorTuple& x) {
  if (x.field != t.field()) {
    throw std::invalid_argument("factor tuple field does not match tensor field");
  }
  if (x.factors.size() != t.order()) {
    throw std::invalid_argument("factor count does not match tensor order");
  }
  for (std::size_t i = 0; i < t.order(); ++i) {
    if (x.factors[i].size() != t.shape()[i]) {
      throw std::invalid_argument("factor length does not match tensor shape");
    }
  }
}

}  // namespace

std::vector<Cplx> partial_contraction(const DenseTensor& t,
                                      const FactorTuple& x, std::size_t slot) {
  check_compatible(t, x);
  const std::size_t p = t.order();
  if (slot >= p) throw std::invalid_argument("partial_contraction: slot out of range");

  std::vector<Cplx> buf;
  std::span<const Cplx> cur = t.data();
  std::size_t cur_size = t.size();
  bool conj_pending = true;

  // Fold trailing modes p-1 .. slot+1: contiguous dot per output element.
  for (std::size_t m = p; m-- > slot + 1;) {
    const std::size_t d = t.shape()[m];
    const auto& v = x.factors[m];
    const std::size_t rows = cur_size / d;
    std::vector<Cplx> next(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const Cplx* row = cur.data() + r * d;
      Cplx s{0.0, 0.0};
      if (conj_pending) {
        for (std::size_t j = 0; j < d; ++j) s += std::conj(row[j]) * v[j];
      } else {
        for (std::size_t j = 0; j < d; ++j) s += row[j] * v[j];
      }
      next[r] = s;
    }
    buf = std::move(next);
    cur = buf;
    cur_size = rows;
    conj_pending = false;
  }

  // Fold leading modes 0 .. slot-1: strided axpy over the leading axis.
  for (std::size_t m = 0; m < slot; ++m) {
    const std::size_t d = t.shape()[m];
    const auto& v = x.factors[m];
    const std::size_t rest = cur_size / d;
    std::vector<Cplx> next(rest, Cplx{0.0, 0.0});
    for (std::size_t j = 0; j < d; ++j) {
      const Cplx* block = cur.data() + j * rest;
      const Cplx vj = v[j];
      if (conj_pending) {
        for (std::size_t r = 0; r < rest; ++r) next[r] += std::conj(block[r]) * vj;
      } else {
        for (std::size_t r = 0; r < rest; ++r) next[r] += block[r] * vj;
      }
    }
    buf = std::move(next);
    cur = buf;
    cur_size = rest;
    conj_pending = false;
  }

  if (conj_pending) {  // p == 1: plain conjugated copy
    buf.resize(cur_size);
    for (std::size_t i = 0; i < cur_size; ++i) buf[i] = std::conj(cur[i]);
  }
  return buf;
}

Cplx rank_one_overlap(const DenseTensor& t, const FactorTuple& x) {
  std::vector<Cplx> w = partial_contraction(t, x, 0);
  const auto& v = x.factors[0];
  Cplx s{0.0, 0.0};
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * v[j];
  return s;
}

double frobenius_norm(const DenseTensor& t) {
  // Kahan summation: entry counts can reach 2^28.
  double sum = 0.0, c = 0.0;
  for (const Cplx& z : t.data()) {
    const double term = std::norm(z) - c;
    const double next = sum + term;
    c = (next - sum) - term;
    sum = next;
  }
  return std::sqrt(sum);
}

namespace {

void require_cubic(const DenseTensor& t, const char* what) {
  if (!t.cubic()) {
    throw std::invalid_argument(std::string(what) + ": requires a cubic shape");
  }
}

// Advances a nondecreasing multi-index over {0..d-1}^p (combinations with
// repetition). Returns false once exhausted.
bool next_sorted_index(std::vector<std::size_t>& idx, std::size_t d) {
  std::size_t pos = idx.size();
  while (pos-- > 0) {
    if (idx[pos] + 1 < d) {
      const std::size_t v = idx[pos] + 1;
      for (std::size_t i = pos; i < idx.size(); ++i) idx[i] = v;
      return true;
    }
    if (pos == 0) break;
  }
  return false;
}

}  // namespace

DenseTensor symmetrize(const DenseTensor& t) {
  require_cubic(t, "symmetrize");
  const std::size_t p = t.order();
  const std::size_t d = t.shape()[0];
  DenseTensor out(t.field(), t.shape());

  std::vector<std::size_t> idx(p, 0);
  std::vector<std::size_t> perm(p);
  do {
    perm = idx;
    Cplx sum{0.0, 0.0};
    std::size_t count = 0;
    do {
      sum += t[t.flat_index(perm)];
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    const Cplx avg = sum / static_cast<double>(count);
    perm = idx;
    do {
      out[out.flat_index(perm)] = avg;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (next_sorted_index(idx, d));
  return out;
}

bool is_symmetric(const DenseTensor& t, double tol) {
  require_cubic(t, "is_symmetric");
  const std::size_t p = t.order();
  std::vector<std::size_t> idx(p);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    t.multi_index(flat, idx);
    if (std::is_sorted(idx.begin(), idx.end())) continue;
    std::sort(idx.begin(), idx.end());
    if (std::abs(t[flat] - t[t.flat_index(idx)]) > tol) return false;
  }
  return true;
}

void save_tensor(const DenseTensor& t, std::ostream& out) {
  out << (t.field() == Field::real ? "real" : "complex") << ' ' << t.order();
  for (std::size_t d : t.shape()) out << ' ' << d;
  out << '\n';
  char line[64];
  for (const Cplx& z : t.data()) {
    if (t.field() == Field::real) {
      std::snprintf(line, sizeof line, "%.17g\n", z.real());
    } else {
      std::snprintf(line, sizeof line, "%.17g %.17g\n", z.real(), z.imag());
    }
    out << line;
  }
}

DenseTensor load_tensor(std::istream& in) {
  std::string field_name;
  std::size_t p = 0;
  if (!(in >> field_name >> p)) {
    throw std::runtime_error("load_tensor: malformed header");
  }
  Field field;
  if (field_name == "real") {
    field = Field::real;
  } else if (field_name == "complex") {
    field = Field::complex;
  } else {
    throw std::runtime_error("load_tensor: unknown field '" + field_name + "'");
  }
  if (p == 0) throw std::runtime_error("load_tensor: order must be positive");
  std::vector<std::size_t> shape(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (!(in >> shape[i])) throw std::runtime_error("load_tensor: short header");
  }
  DenseTensor t(field, std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) {
    double re = 0.0, im = 0.0;
    if (!(in >> re)) throw std::runtime_error("load_tensor: short data");
    if (field == Field::complex && !(in >> im)) {
      throw std::runtime_error("load_tensor: short data");
    }
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw std::runtime_error("load_tensor: non-finite entry");
    }
    t[i] = Cplx{re, im};
  }
  return t;
}

double vector_norm(std::span<const Cplx> v) {
  double s = 0.0;
  for (const Cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void normalize(std::span<Cplx> v) {
  const double n = vector_norm(v);
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  for (Cplx& z : v) z /= n;
}

}  // namespace injnorm
