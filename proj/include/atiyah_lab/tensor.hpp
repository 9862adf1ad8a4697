#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace alab {

/// Dense three-index array, last index fastest.
template <typename T>
class Tensor3 {
public:
  Tensor3() = default;
  Tensor3(std::size_t n0, std::size_t n1, std::size_t n2, const T& fill = T())
      : dims_{n0, n1, n2}, data_(n0 * n1 * n2, fill) {}

  std::size_t dim(std::size_t axis) const { return dims_[axis]; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * dims_[1] + j) * dims_[2] + k]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }

  T& flat(std::size_t idx) { return data_[idx]; }
  const T& flat(std::size_t idx) const { return data_[idx]; }

  friend bool operator==(const Tensor3& a, const Tensor3& b) { return a.dims_ == b.dims_ && a.data_ == b.data_; }

private:
  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::vector<T> data_;
};

}  // namespace alab
