#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace phasespace {

/// In-place complex 2D FFT of an n0 x n1 row-major array (FFTW backend).
/// Plans are built with FFTW_ESTIMATE on aligned buffers so results are
/// reproducible run to run.
class Fft2d {
 public:
  enum class Direction { forward, backward };

  Fft2d(std::size_t n0, std::size_t n1, Direction direction);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&&) noexcept;
  Fft2d& operator=(Fft2d&&) noexcept;

  std::complex<double>* data() noexcept;
  std::size_t n0() const noexcept { return n0_; }
  std::size_t n1() const noexcept { return n1_; }

  // Unnormalized transform: sum_k a_k exp(sign 2 pi i j k / n).
  void execute();

 private:
  struct Impl;
  std::size_t n0_;
  std::size_t n1_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace phasespace
