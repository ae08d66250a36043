#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "smap/fields.hpp"

namespace smap {

enum class TrajectoryKind { complex_chart, sphere };

/// Snapshots of one field type on the uniform time grid t_m = t0 + m*dt.
template <typename Field>
class Trajectory {
 public:
  using Scalar = typename Field::scalar_type;

  static constexpr TrajectoryKind kind =
      std::is_same_v<Field, SphereField<Scalar>> ? TrajectoryKind::sphere : TrajectoryKind::complex_chart;

  Trajectory() = default;
  Trajectory(const GridSpec& grid, Scalar dt, Scalar t0 = Scalar(0)) : grid_(grid), dt_(dt), t0_(t0) {
    grid_.validate();
    if (!(dt > Scalar(0))) throw std::invalid_argument("Trajectory: time step must be positive");
  }

  /// Appends the next snapshot; its time must match t0 + m*dt.
  void push_back(Field f) {
    require_same_grid(grid_, f.grid(), "Trajectory::push_back");
    const Scalar expected = time(static_cast<int>(snapshots_.size()));
    if (std::abs(f.time() - expected) > Scalar(1e-12) * std::max(Scalar(1), std::abs(expected)))
      throw std::invalid_argument("Trajectory: snapshot at t=" + std::to_string(f.time()) +
                                  " breaks the uniform grid (expected " + std::to_string(expected) + ")");
    f.set_time(expected);
    snapshots_.push_back(std::move(f));
  }

  const GridSpec& grid() const { return grid_; }
  Scalar dt() const { return dt_; }
  Scalar t0() const { return t0_; }
  Scalar time(int m) const { return t0_ + static_cast<Scalar>(m) * dt_; }
  Scalar end_time() const { return time(size() - 1); }
  int size() const { return static_cast<int>(snapshots_.size()); }
  bool empty() const { return snapshots_.empty(); }

  const Field& operator[](int m) const { return snapshots_[static_cast<std::size_t>(m)]; }
  const std::vector<Field>& snapshots() const { return snapshots_; }
  auto begin() const { return snapshots_.begin(); }
  auto end() const { return snapshots_.end(); }

 private:
  GridSpec grid_;
  Scalar dt_ = Scalar(1);
  Scalar t0_ = Scalar(0);
  std::vector<Field> snapshots_;
};

template <typename Scalar>
using ChartTrajectory = Trajectory<ComplexField<Scalar>>;

template <typename Scalar>
using SphereTrajectory = Trajectory<SphereField<Scalar>>;

}  // namespace smap
