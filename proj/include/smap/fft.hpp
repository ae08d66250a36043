#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace smap::detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  // Plans are cached per engine; one engine per thread keeps the cache private.
  thread_local Eigen::FFT<Scalar> engine = [] {
    Eigen::FFT<Scalar> e;
    e.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    return e;
  }();
  return engine;
}

/// Unitary multi-dimensional DFT along the listed axes of a row-major array.
/// Forward uses exp(-i k x); both directions scale by 1/sqrt(len) per axis.
template <typename Scalar>
void fft_axes(std::complex<Scalar>* data, std::span<const int> shape, std::span<const int> axes,
              bool inverse) {
  using Complex = std::complex<Scalar>;
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(s);

  auto& engine = fft_engine<Scalar>();
  std::vector<Complex> in, out;
  for (int axis : axes) {
    const auto len = static_cast<std::size_t>(shape[axis]);
    std::size_t stride = 1;
    for (std::size_t a = axis + 1; a < shape.size(); ++a) stride *= static_cast<std::size_t>(shape[a]);
    const std::size_t blocks = total / (len * stride);
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(len));
    in.resize(len);
    out.resize(len);
    for (std::size_t b = 0; b < blocks; ++b) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        Complex* line = data + b * len * stride + inner;
        for (std::size_t i = 0; i < len; ++i) in[i] = line[i * stride];
        if (inverse)
          engine.inv(out, in);
        else
          engine.fwd(out, in);
        for (std::size_t i = 0; i < len; ++i) line[i * stride] = out[i] * scale;
      }
    }
  }
}

}  // namespace smap::detail
