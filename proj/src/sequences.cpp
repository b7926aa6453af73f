#include "dsthin/sequences.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "dsthin/fft.hpp"
#include "dsthin/parallel.hpp"

namespace dsthin {

ExcitationGrid::ExcitationGrid(int P, int Q) : P_(P), Q_(Q)
{
    if (P <= 0 || Q <= 0)
        throw std::invalid_argument("ExcitationGrid: non-positive dimensions");
    weights_.assign(static_cast<std::size_t>(P) * Q, {0.0, 0.0});
}

ExcitationGrid ExcitationGrid::all_ones(int P, int Q)
{
    ExcitationGrid g(P, Q);
    for (auto& w : g.weights_)
        w = {1.0, 0.0};
    return g;
}

bool ExcitationGrid::is_binary() const
{
    for (const auto& w : weights_) {
        if (w.imag() != 0.0)
            return false;
        if (w.real() != 0.0 && w.real() != 1.0)
            return false;
    }
    return true;
}

std::vector<std::pair<int, int>> ExcitationGrid::active_cells() const
{
    std::vector<std::pair<int, int>> cells;
    for (int p = 0; p < P_; ++p)
        for (int q = 0; q < Q_; ++q)
            if (at(p, q) != std::complex<double>(0.0, 0.0))
                cells.emplace_back(p, q);
    return cells;
}

AutocorrGrid autocorrelation(const ExcitationGrid& grid)
{
    const int P = grid.P(), Q = grid.Q();
    AutocorrGrid acf{P, Q, std::vector<std::complex<double>>(grid.size())};

    if (grid.is_binary()) {
        // Exact integer counting over the active cells.
        const auto cells = grid.active_cells();
        std::vector<std::uint8_t> occ(grid.size(), 0);
        for (const auto& [p, q] : cells)
            occ[static_cast<std::size_t>(p) * Q + q] = 1;
        for (int s = 0; s < P; ++s) {
            for (int t = 0; t < Q; ++t) {
                long long count = 0;
                for (const auto& [p, q] : cells) {
                    const int ps = p + s >= P ? p + s - P : p + s;
                    const int qt = q + t >= Q ? q + t - Q : q + t;
                    count += occ[static_cast<std::size_t>(ps) * Q + qt];
                }
                acf.values[static_cast<std::size_t>(s) * Q + t] = {static_cast<double>(count), 0.0};
            }
        }
        return acf;
    }

    // Complex grids: Wiener-Khinchin route, a = forward(|backward(alpha)|^2) / (PQ).
    Fft2D fft(P, Q);
    auto F = fft.backward(grid.weights());
    std::vector<std::complex<double>> power(F.size());
    for (std::size_t i = 0; i < F.size(); ++i)
        power[i] = {std::norm(F[i]), 0.0};
    auto a = fft.forward(power);
    const double scale = 1.0 / (static_cast<double>(P) * Q);
    for (std::size_t i = 0; i < a.size(); ++i)
        acf.values[i] = a[i] * scale;
    return acf;
}

std::vector<std::complex<double>> spectrum(const ExcitationGrid& grid)
{
    Fft2D fft(grid.P(), grid.Q());
    return fft.backward(grid.weights());
}

SpectralSamples spectral_samples(const ExcitationGrid& grid)
{
    const auto F = spectrum(grid);
    SpectralSamples s{grid.P(), grid.Q(), std::vector<double>(F.size()),
                      std::vector<double>(F.size())};
    for (std::size_t i = 0; i < F.size(); ++i) {
        s.xi[i] = std::norm(F[i]);
        s.eta[i] = std::arg(F[i]);
    }
    return s;
}

std::vector<double> xi_from_autocorrelation(const AutocorrGrid& acf)
{
    Fft2D fft(acf.P, acf.Q);
    auto xi = fft.backward(acf.values);
    std::vector<double> out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
        out[i] = xi[i].real();
    return out;
}

ExcitationGrid cyclic_shift(const ExcitationGrid& grid, int sx, int sy)
{
    const int P = grid.P(), Q = grid.Q();
    const int ax = ((sx % P) + P) % P;
    const int ay = ((sy % Q) + Q) % Q;
    ExcitationGrid out(P, Q);
    for (int p = 0; p < P; ++p) {
        const int ps = p + ax >= P ? p + ax - P : p + ax;
        for (int q = 0; q < Q; ++q) {
            const int qt = q + ay >= Q ? q + ay - Q : q + ay;
            out.set(p, q, grid.at(ps, qt));
        }
    }
    return out;
}

ExcitationGrid random_thinned(int P, int Q, double tau, std::uint64_t seed)
{
    if (tau < 0.0 || tau > 1.0)
        throw std::invalid_argument("random_thinned: tau outside [0, 1]");
    const std::size_t n = static_cast<std::size_t>(P) * Q;
    const std::size_t count = static_cast<std::size_t>(std::llround(tau * static_cast<double>(n)));

    std::vector<std::uint32_t> cells(n);
    std::iota(cells.begin(), cells.end(), 0u);
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates; first `count` entries are the draw.
    for (std::size_t i = 0; i < count && i + 1 < n; ++i) {
        const std::size_t j = i + bounded_uint(rng, n - i);
        std::swap(cells[i], cells[j]);
    }
    ExcitationGrid g(P, Q);
    for (std::size_t i = 0; i < count; ++i)
        g.set(static_cast<int>(cells[i] / Q), static_cast<int>(cells[i] % Q), {1.0, 0.0});
    return g;
}

} // namespace dsthin
