#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lift {

/// Dense row-major array of fixed rank, used for component tables
/// (metric g_ij, coefficients Gamma^c_ab, curvature R^k_lij).
template <class T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<int> shape, const T& fill) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (int s : shape_) {
      if (s < 0) throw std::invalid_argument("negative tensor extent");
      n *= static_cast<std::size_t>(s);
    }
    data_.assign(n, fill);
  }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int extent(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[offset(std::array<int, sizeof...(I)>{static_cast<int>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[offset(std::array<int, sizeof...(I)>{static_cast<int>(idx)...})];
  }

  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }

  template <class F>
  auto map(F&& f) const -> Tensor<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    Tensor<U> out(shape_, U{});
    auto dst = out.flat();
    for (std::size_t i = 0; i < data_.size(); ++i) dst[i] = f(data_[i]);
    return out;
  }

 private:
  template <std::size_t N>
  std::size_t offset(const std::array<int, N>& idx) const {
    if (N != shape_.size()) throw std::out_of_range("tensor rank mismatch");
    std::size_t off = 0;
    for (std::size_t a = 0; a < N; ++a) {
      if (idx[a] < 0 || idx[a] >= shape_[a]) {
        throw std::out_of_range("tensor index " + std::to_string(idx[a]) + " out of range on axis " +
                                std::to_string(a));
      }
      off = off * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx[a]);
    }
    return off;
  }

  std::vector<int> shape_;
  std::vector<T> data_;
};

}  // namespace lift
