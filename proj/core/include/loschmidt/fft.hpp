#pragma once

#include <cstddef>
#include <span>

#include "loschmidt/core.hpp"

namespace loschmidt {

/// Real-to-half-complex transform of fixed size backed by FFTW.
///
/// Owns aligned buffers and plans; plan creation is serialized internally
/// so instances may be built from concurrent workers. Transforms are
/// unnormalized: backward(forward(x)) == n * x.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::span<double> real() noexcept { return {real_, n_}; }
  std::span<Complex> spectrum() noexcept { return {spectrum_, n_ / 2 + 1}; }

  void forward();   // real() -> spectrum()
  void backward();  // spectrum() -> real(); clobbers spectrum()

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  double* real_ = nullptr;
  Complex* spectrum_ = nullptr;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// In-place complex transform of fixed size backed by FFTW.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  ~ComplexFft();
  ComplexFft(ComplexFft&& other) noexcept;
  ComplexFft& operator=(ComplexFft&& other) noexcept;
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::span<Complex> data() noexcept { return {data_, n_}; }

  void forward();   // X_k = sum_j x_j exp(-2 pi i jk/n)
  void backward();  // x_j = sum_k X_k exp(+2 pi i jk/n)

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  Complex* data_ = nullptr;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace loschmidt
