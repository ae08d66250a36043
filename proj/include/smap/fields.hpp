#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Core>

#include "smap/errors.hpp"
#include "smap/grid.hpp"

namespace smap {

enum class Representation { physical, frequency };

template <typename Scalar>
using ComplexValues = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealValues = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Three real components per grid point, one column per component.
template <typename Scalar>
using Vector3Values = Eigen::Array<Scalar, Eigen::Dynamic, 3>;

/// Complex samples of u on a GridSpec, either at grid points or as unitary
/// DFT coefficients. The tag only changes through spectral transforms.
template <typename Scalar>
class ComplexField {
 public:
  using scalar_type = Scalar;
  using Complex = std::complex<Scalar>;
  using Values = ComplexValues<Scalar>;

  ComplexField() = default;

  explicit ComplexField(const GridSpec& grid, Representation rep = Representation::physical,
                        Scalar time = Scalar(0))
      : grid_(grid), time_(time), rep_(rep) {
    grid_.validate();
    values_ = Values::Zero(static_cast<Eigen::Index>(grid_.size()));
  }

  ComplexField(const GridSpec& grid, Values values, Representation rep, Scalar time = Scalar(0))
      : grid_(grid), time_(time), rep_(rep), values_(std::move(values)) {
    grid_.validate();
    if (static_cast<std::size_t>(values_.size()) != grid_.size())
      throw GridMismatch("ComplexField: value count does not match grid");
  }

  const GridSpec& grid() const { return grid_; }
  Scalar time() const { return time_; }
  void set_time(Scalar t) { time_ = t; }
  Representation representation() const { return rep_; }
  bool is_physical() const { return rep_ == Representation::physical; }

  const Values& values() const { return values_; }
  Values& values() { return values_; }

  /// Riemann-weighted L2 norm; identical in both representations because the
  /// transform is unitary.
  Scalar l2_norm() const {
    return std::sqrt(values_.abs2().sum() * static_cast<Scalar>(grid_.cell_volume()));
  }

  ComplexField conj() const { return ComplexField(grid_, values_.conjugate(), rep_, time_); }

 private:
  GridSpec grid_;
  Scalar time_ = Scalar(0);
  Representation rep_ = Representation::physical;
  Values values_;
};

/// Unit 3-vectors sampling s: T^d -> S^2. Construction renormalizes every
/// point and keeps the largest pre-normalization deviation | |v| - 1 |.
template <typename Scalar>
class SphereField {
 public:
  using scalar_type = Scalar;
  using Values = Vector3Values<Scalar>;

  SphereField() = default;

  SphereField(const GridSpec& grid, Values raw, Scalar time = Scalar(0))
      : grid_(grid), time_(time), values_(std::move(raw)) {
    grid_.validate();
    if (static_cast<std::size_t>(values_.rows()) != grid_.size())
      throw GridMismatch("SphereField: value count does not match grid");
    RealValues<Scalar> norms = values_.matrix().rowwise().norm().array();
    if ((norms <= Scalar(0)).any()) throw DegenerateInput("SphereField: zero vector cannot be normalized");
    defect_ = (norms - Scalar(1)).abs().maxCoeff();
    values_.colwise() /= norms;
  }

  static SphereField constant(const GridSpec& grid, Scalar x, Scalar y, Scalar z, Scalar time = Scalar(0)) {
    Values v(static_cast<Eigen::Index>(grid.size()), 3);
    v.col(0).setConstant(x);
    v.col(1).setConstant(y);
    v.col(2).setConstant(z);
    return SphereField(grid, std::move(v), time);
  }

  /// Adopts rows that are already unit length without touching their bits.
  static SphereField verbatim(const GridSpec& grid, Values unit, Scalar time = Scalar(0),
                              Scalar tolerance = Scalar(1e-12)) {
    SphereField out;
    out.grid_ = grid;
    out.time_ = time;
    out.values_ = std::move(unit);
    grid.validate();
    if (static_cast<std::size_t>(out.values_.rows()) != grid.size())
      throw GridMismatch("SphereField: value count does not match grid");
    if (!(out.unit_defect() <= tolerance)) throw DegenerateInput("SphereField: rows are not unit vectors");
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  Scalar time() const { return time_; }
  void set_time(Scalar t) { time_ = t; }
  const Values& values() const { return values_; }
  auto component(int l) const { return values_.col(l); }

  /// Deviation from unit length seen before normalization.
  Scalar normalization_defect() const { return defect_; }

  /// Current deviation from unit length (rounding level after construction).
  Scalar unit_defect() const {
    return (values_.matrix().rowwise().norm().array() - Scalar(1)).abs().maxCoeff();
  }

 private:
  GridSpec grid_;
  Scalar time_ = Scalar(0);
  Values values_;
  Scalar defect_ = Scalar(0);
};

using ComplexFieldd = ComplexField<double>;
using SphereFieldd = SphereField<double>;

}  // namespace smap
