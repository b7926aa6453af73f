#include "dsthin/fft.hpp"

#include <cstring>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace dsthin {

namespace {
// fftw planning is not thread safe; execution of distinct plans is.
std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace

Fft2D::Fft2D(int rows, int cols) : rows_(rows), cols_(cols)
{
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("Fft2D: non-positive dimensions");
    const size_t n = static_cast<size_t>(rows) * cols;
    buf_ = fftw_malloc(sizeof(fftw_complex) * n);
    if (!buf_)
        throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto* b = static_cast<fftw_complex*>(buf_);
    fwd_ = fftw_plan_dft_2d(rows, cols, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(rows, cols, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2D::~Fft2D()
{
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
    fftw_free(buf_);
}

void Fft2D::run(const void* plan, const std::complex<double>* in, std::complex<double>* out) const
{
    const size_t n = static_cast<size_t>(rows_) * cols_;
    auto* b = static_cast<fftw_complex*>(buf_);
    // std::complex<double> is layout-compatible with fftw_complex
    std::memcpy(static_cast<void*>(b), static_cast<const void*>(in), sizeof(fftw_complex) * n);
    fftw_execute(static_cast<fftw_plan>(const_cast<void*>(plan)));
    std::memcpy(static_cast<void*>(out), static_cast<const void*>(b), sizeof(fftw_complex) * n);
}

void Fft2D::forward(const std::complex<double>* in, std::complex<double>* out) const
{
    run(fwd_, in, out);
}

void Fft2D::backward(const std::complex<double>* in, std::complex<double>* out) const
{
    run(bwd_, in, out);
}

std::vector<std::complex<double>> Fft2D::forward(const std::vector<std::complex<double>>& in) const
{
    std::vector<std::complex<double>> out(in.size());
    forward(in.data(), out.data());
    return out;
}

std::vector<std::complex<double>> Fft2D::backward(const std::vector<std::complex<double>>& in) const
{
    std::vector<std::complex<double>> out(in.size());
    backward(in.data(), out.data());
    return out;
}

} // namespace dsthin
