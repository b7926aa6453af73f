#pragma once

#include <complex>
#include <vector>

namespace dsthin {

/// Unnormalized 2D DFT of a rows x cols complex array (row-major, cols
/// contiguous). backward() uses the exp(+j...) kernel, forward() exp(-j...).
/// Plan creation is serialized internally; a constructed Fft2D may be used
/// from the thread that owns it. For parallel sweeps give each thread its own
/// instance.
class Fft2D {
public:
    Fft2D(int rows, int cols);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    void backward(const std::complex<double>* in, std::complex<double>* out) const;

    std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in) const;
    std::vector<std::complex<double>> backward(const std::vector<std::complex<double>>& in) const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    void run(const void* plan, const std::complex<double>* in, std::complex<double>* out) const;

    int rows_, cols_;
    void* fwd_;
    void* bwd_;
    void* buf_;
};

} // namespace dsthin
