#include "dsthin/reference.hpp"

#include <cmath>

namespace dsthin::reference {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

AutocorrGrid autocorrelation_direct(const ExcitationGrid& grid)
{
    const int P = grid.P(), Q = grid.Q();
    AutocorrGrid acf{P, Q, std::vector<std::complex<double>>(grid.size())};
    for (int s = 0; s < P; ++s) {
        for (int t = 0; t < Q; ++t) {
            std::complex<double> sum = 0.0;
            for (int p = 0; p < P; ++p) {
                for (int q = 0; q < Q; ++q) {
                    const int ps = p + s >= P ? p + s - P : p + s;
                    const int qt = q + t >= Q ? q + t - Q : q + t;
                    sum += std::conj(grid.at(p, q)) * grid.at(ps, qt);
                }
            }
            acf.values[static_cast<std::size_t>(s) * Q + t] = sum;
        }
    }
    return acf;
}

std::vector<std::complex<double>> spectrum_direct(const ExcitationGrid& grid)
{
    const int P = grid.P(), Q = grid.Q();
    std::vector<std::complex<double>> F(grid.size());
    for (int k = 0; k < P; ++k) {
        for (int l = 0; l < Q; ++l) {
            std::complex<double> sum = 0.0;
            for (int p = 0; p < P; ++p)
                for (int q = 0; q < Q; ++q)
                    sum += grid.at(p, q) *
                           std::polar(1.0, kTwoPi * (static_cast<double>(p) * k / P +
                                                     static_cast<double>(q) * l / Q));
            F[static_cast<std::size_t>(k) * Q + l] = sum;
        }
    }
    return F;
}

std::vector<double> pattern_grid_direct(const ExcitationGrid& grid, int oversample)
{
    const int P = grid.P(), Q = grid.Q(), O = oversample;
    const int rows = P * O, cols = Q * O;
    std::vector<double> af(static_cast<std::size_t>(rows) * cols);
    for (int k = 0; k < rows; ++k) {
        for (int l = 0; l < cols; ++l) {
            std::complex<double> sum = 0.0;
            const double chi = kTwoPi * k / rows;
            const double psi = kTwoPi * l / cols;
            for (int p = 0; p < P; ++p)
                for (int q = 0; q < Q; ++q)
                    sum += grid.at(p, q) * std::polar(1.0, p * chi + q * psi);
            af[static_cast<std::size_t>(k) * cols + l] = std::norm(sum);
        }
    }
    return af;
}

double directivity_serial(const ExcitationGrid& grid, const UnitCell& cell,
                          const ElementPattern& ep, const Steering& steer,
                          const QuadratureSpec& quad)
{
    const PatternEvaluator eval(grid, cell, ep, steer);
    const double peak = eval.peak();
    const double dTheta = (kPi / 2.0) / quad.nTheta;
    const double dPhi = (2.0 * kPi) / quad.nPhi;
    double integral = 0.0;
    for (int i = 0; i < quad.nTheta; ++i) {
        const double theta = (i + 0.5) * dTheta;
        const double st = std::sin(theta);
        double acc = 0.0;
        for (int j = 0; j < quad.nPhi; ++j) {
            const double phi = (j + 0.5) * dPhi;
            acc += eval.power(st * std::cos(phi), st * std::sin(phi));
        }
        integral += acc * st;
    }
    integral *= dTheta * dPhi;
    return 10.0 * std::log10(4.0 * kPi * peak / integral);
}

} // namespace dsthin::reference
