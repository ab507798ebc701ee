#include "phasespace/fft2d.hpp"

#include <fftw3.h>

#include <mutex>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {
// FFTW planning is not thread-safe.
std::mutex g_plan_mutex;
}  // namespace

struct Fft2d::Impl {
  fftw_complex* buffer = nullptr;
  fftw_plan plan = nullptr;

  ~Impl() {
    std::lock_guard lock(g_plan_mutex);
    if (plan != nullptr) fftw_destroy_plan(plan);
    if (buffer != nullptr) fftw_free(buffer);
  }
};

Fft2d::Fft2d(std::size_t n0, std::size_t n1, Direction direction)
    : n0_(n0), n1_(n1), impl_(std::make_unique<Impl>()) {
  require(n0 >= 1 && n1 >= 1, ErrorCode::argument, "FFT dimensions must be positive");
  std::lock_guard lock(g_plan_mutex);
  impl_->buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n0 * n1));
  if (impl_->buffer == nullptr) fail(ErrorCode::numeric, "FFT buffer allocation failed");
  impl_->plan = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), impl_->buffer, impl_->buffer,
                                 direction == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  if (impl_->plan == nullptr) fail(ErrorCode::numeric, "FFT plan creation failed");
}

Fft2d::~Fft2d() = default;
Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

std::complex<double>* Fft2d::data() noexcept { return reinterpret_cast<std::complex<double>*>(impl_->buffer); }

void Fft2d::execute() { fftw_execute(impl_->plan); }

}  // namespace phasespace
