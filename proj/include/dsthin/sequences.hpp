#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace dsthin {

/// P x Q complex excitation weights alpha_pq. Storage is row-major with p as
/// the row index (p counts steps along d1, q along d2).
class ExcitationGrid {
public:
    ExcitationGrid(int P, int Q);

    static ExcitationGrid all_ones(int P, int Q);

    int P() const { return P_; }
    int Q() const { return Q_; }
    std::size_t size() const { return weights_.size(); }

    std::complex<double> at(int p, int q) const { return weights_[idx(p, q)]; }
    void set(int p, int q, std::complex<double> w) { weights_[idx(p, q)] = w; }

    const std::vector<std::complex<double>>& weights() const { return weights_; }

    /// True when every weight is exactly 0 or 1.
    bool is_binary() const;

    /// Indices (p, q) of the nonzero cells of a binary grid.
    std::vector<std::pair<int, int>> active_cells() const;

private:
    std::size_t idx(int p, int q) const { return static_cast<std::size_t>(p) * Q_ + q; }
    int P_, Q_;
    std::vector<std::complex<double>> weights_;
};

/// Circular autocorrelation a_st of an excitation grid (conjugate-first
/// convention; identical to the plain product for real grids).
struct AutocorrGrid {
    int P, Q;
    std::vector<std::complex<double>> values;

    std::complex<double> at(int s, int t) const
    {
        return values[static_cast<std::size_t>(s) * Q + t];
    }
};

/// Spectral samples xi_kl = |F_kl|^2 and phases eta_kl = arg F_kl of
/// F_kl = sum_pq alpha_pq exp(+j 2 pi (p k / P + q l / Q)).
struct SpectralSamples {
    int P, Q;
    std::vector<double> xi;
    std::vector<double> eta;

    double xi_at(int k, int l) const { return xi[static_cast<std::size_t>(k) * Q + l]; }
    double eta_at(int k, int l) const { return eta[static_cast<std::size_t>(k) * Q + l]; }
};

AutocorrGrid autocorrelation(const ExcitationGrid& grid);

SpectralSamples spectral_samples(const ExcitationGrid& grid);

/// The complex spectrum F_kl itself (+j kernel, unnormalized).
std::vector<std::complex<double>> spectrum(const ExcitationGrid& grid);

/// xi_kl recovered from an autocorrelation grid alone (the +j transform of
/// a_st); imaginary residue is discarded after a consistency check.
std::vector<double> xi_from_autocorrelation(const AutocorrGrid& acf);

/// output(p, q) = input([p + sx]_P, [q + sy]_Q).
ExcitationGrid cyclic_shift(const ExcitationGrid& grid, int sx, int sy);

/// Binary grid with exactly round(tau * P * Q) ones drawn uniformly without
/// replacement; identical output for identical seed on every platform.
ExcitationGrid random_thinned(int P, int Q, double tau, std::uint64_t seed);

} // namespace dsthin
