#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "schouten/expr.hpp"

namespace schouten {

/// Dense rank-r array of scalars with all extents equal to the chart
/// dimension.  Row-major; index arity is checked in debug builds.
template <typename T>
class TensorData {
 public:
  TensorData() = default;
  TensorData(int dim, int rank) : dim_(dim), rank_(rank) {
    std::size_t size = 1;
    for (int r = 0; r < rank; ++r) size *= static_cast<std::size_t>(dim);
    a_.assign(size, T{});
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::size_t size() const { return a_.size(); }

  template <typename... I>
  T& operator()(I... idx) {
    return a_[offset(idx...)];
  }
  template <typename... I>
  const T& operator()(I... idx) const {
    return a_[offset(idx...)];
  }

  T& flat(std::size_t i) { return a_[i]; }
  const T& flat(std::size_t i) const { return a_[i]; }

  auto begin() { return a_.begin(); }
  auto end() { return a_.end(); }
  auto begin() const { return a_.begin(); }
  auto end() const { return a_.end(); }

 private:
  template <typename... I>
  std::size_t offset(I... idx) const {
    assert(static_cast<int>(sizeof...(idx)) == rank_);
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  int rank_ = 0;
  std::vector<T> a_;
};

enum class Slot { Upper, Lower };

/// Pointwise tensor value: dense components plus per-slot variance and
/// the base point the components were evaluated at.
struct TensorValue {
  std::vector<double> point;
  std::vector<Slot> variance;
  TensorData<double> comps;

  int rank() const { return comps.rank(); }
  int dim() const { return comps.dim(); }
};

/// Tensor field with symbolic components over the chart coordinates.
struct ExprTensor {
  std::vector<Slot> variance;
  TensorData<Expr> comps;

  int rank() const { return comps.rank(); }
  int dim() const { return comps.dim(); }
};

}  // namespace schouten
