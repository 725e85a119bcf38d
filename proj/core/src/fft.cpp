#include "loschmidt/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <utility>

namespace loschmidt {
namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
T* allocate(std::size_t count) {
  void* p = fftw_malloc(sizeof(T) * count);
  if (p == nullptr) throw std::bad_alloc();
  return static_cast<T*>(p);
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  real_ = allocate<double>(n_);
  spectrum_ = allocate<Complex>(n_ / 2 + 1);
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n_);
  forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, as_fftw(spectrum_), FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_c2r_1d(len, as_fftw(spectrum_), real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() { release(); }

RealFft::RealFft(RealFft&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      real_(std::exchange(other.real_, nullptr)),
      spectrum_(std::exchange(other.spectrum_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

RealFft& RealFft::operator=(RealFft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    real_ = std::exchange(other.real_, nullptr);
    spectrum_ = std::exchange(other.spectrum_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void RealFft::release() noexcept {
  {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  }
  fftw_free(real_);
  fftw_free(spectrum_);
  forward_plan_ = backward_plan_ = nullptr;
  real_ = nullptr;
  spectrum_ = nullptr;
}

void RealFft::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void RealFft::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  data_ = allocate<Complex>(n_);
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n_);
  forward_plan_ = fftw_plan_dft_1d(len, as_fftw(data_), as_fftw(data_),
                                   FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(len, as_fftw(data_), as_fftw(data_),
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
}

ComplexFft::~ComplexFft() { release(); }

ComplexFft::ComplexFft(ComplexFft&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      data_(std::exchange(other.data_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

ComplexFft& ComplexFft::operator=(ComplexFft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    data_ = std::exchange(other.data_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void ComplexFft::release() noexcept {
  {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  }
  fftw_free(data_);
  forward_plan_ = backward_plan_ = nullptr;
  data_ = nullptr;
}

void ComplexFft::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void ComplexFft::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

}  // namespace loschmidt
