#ifndef INJNORM_TENSOR_HPP
#define INJNORM_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace injnorm {

enum class Field { real, complex };

using Cplx = std::complex<double>;

/// Dense order-p tensor in row-major layout. Entries are stored as complex
/// doubles; a real-field tensor keeps every imaginary part exactly zero, so
/// all downstream arithmetic stays exactly real.
///
/// Hermitian pairing convention throughout: the FIRST argument is
/// conjugated, <x, y> = sum conj(x_k) y_k.
class DenseTensor {
 public:
  static constexpr std::size_t kMaxEntries = std::size_t{1} << 28;

  DenseTensor(Field field, std::vector<std::size_t> shape);

  Field field() const { return field_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t order() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool cubic() const;

  Cplx& operator[](std::size_t flat) { return data_[flat]; }
  const Cplx& operator[](std::size_t flat) const { return data_[flat]; }
  std::span<const Cplx> data() const { return data_; }
  std::span<Cplx> data() { return data_; }

  std::size_t flat_index(std::span<const std::size_t> idx) const;
  void multi_index(std::size_t flat, std::span<std::size_t> idx) const;
  const std::vector<std::size_t>& strides() const { return strides_; }

 private:
  Field field_;
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  std::vector<Cplx> data_;
};

/// One unit vector per tensor slot; factor i has length shape[i].
struct FactorTuple {
  Field field = Field::real;
  std::vector<std::vector<Cplx>> factors;
};

/// <T, x_1 (x) ... (x) x_p> = sum_I conj(T_I) prod_m (x_m)_{I_m}.
Cplx rank_one_overlap(const DenseTensor& t, const FactorTuple& x);

/// w_j = sum_{I: I_slot = j} conj(T_I) prod_{m != slot} (x_m)_{I_m},
/// so that rank_one_overlap(t, x) = sum_j w_j (x_slot)_j. slot is 0-based.
std::vector<Cplx> partial_contraction(const DenseTensor& t,
                                      const FactorTuple& x, std::size_t slot);

double frobenius_norm(const DenseTensor& t);

/// Orthogonal projection onto the symmetric subspace: entry I of the output
/// is the mean of t over all permutations of I. Requires a cubic shape.
/// Runs over sorted-index orbits, never materializing p! terms.
DenseTensor symmetrize(const DenseTensor& t);

/// True iff every entry matches its sorted-index representative within tol.
bool is_symmetric(const DenseTensor& t, double tol);

/// Text format: header "field p d_1 ... d_p", then one entry per line in
/// row-major order ("re" for real tensors, "re im" for complex ones).
void save_tensor(const DenseTensor& t, std::ostream& out);
DenseTensor load_tensor(std::istream& in);

double vector_norm(std::span<const Cplx> v);
void normalize(std::span<Cplx> v);

}  // namespace injnorm

#endif  // INJNORM_TENSOR_HPP
