#ifndef INEXT_TENSOR4_HPP
#define INEXT_TENSOR4_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace inext {

/// Dense N x N x N x N array, row-major in (i, j, k, l).
template <typename Scalar>
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, Scalar(0)) {}

  int dimension() const { return n_; }
  std::size_t size() const { return data_.size(); }

  Scalar& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  const Scalar& operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }

  /// The (k, l) slice for fixed (i, j), viewed as an N x N matrix.
  Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> slice(int i, int j) const {
    return {data_.data() + index(i, j, 0, 0), n_, n_};
  }

  /// Leading m^4 block.
  Tensor4 leading(int m) const {
    Tensor4 out(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) out(i, j, k, l) = (*this)(i, j, k, l);
    return out;
  }

  bool operator==(const Tensor4& other) const { return n_ == other.n_ && data_ == other.data_; }

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }

  int n_ = 0;
  std::vector<Scalar> data_;
};

}  // namespace inext

#endif  // INEXT_TENSOR4_HPP
