#include "dsthin/geometry.hpp"

#include <cassert>
#include <cmath>

#include "dsthin/errors.hpp"

namespace dsthin {

namespace {
constexpr double kNuTolerance = 1e-9;
constexpr double kVisTolerance = 1e-12;
constexpr double kPi = 3.14159265358979323846;
} // namespace

UnitCell make_unit_cell(double d1x, double d1y, double d2x, double d2y)
{
    const double nu = d1x * d2y - d2x * d1y;
    if (std::abs(nu) <= kNuTolerance)
        throw DegenerateLattice(nu);
    return UnitCell{d1x, d1y, d2x, d2y, nu};
}

Direction make_direction(double u, double v)
{
    return Direction{u, v, u * u + v * v <= 1.0 + kVisTolerance};
}

Steering steering_from_angles(double theta0Deg, double phi0Deg)
{
    const double th = theta0Deg * kPi / 180.0;
    const double ph = phi0Deg * kPi / 180.0;
    return Steering{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)};
}

Direction sample_direction_frac(const UnitCell& cell, int P, int Q, double k, double l,
                                const Steering& steer)
{
    const double pq = static_cast<double>(P) * Q;
    const double u = steer.u0 + (k * Q * cell.d2y - l * P * cell.d1y) / (pq * cell.nu);
    const double v = steer.v0 + (l * P * cell.d1x - k * Q * cell.d2x) / (pq * cell.nu);
    return make_direction(u, v);
}

Direction sample_direction(const UnitCell& cell, int P, int Q, int k, int l,
                           const Steering& steer)
{
    assert(k >= 0 && k < P && l >= 0 && l < Q);
    return sample_direction_frac(cell, P, Q, k, l, steer);
}

Direction mid_direction(const UnitCell& cell, int P, int Q, int m, int n,
                        const Steering& steer)
{
    assert(m >= 0 && m < P && n >= 0 && n < Q);
    return sample_direction_frac(cell, P, Q, m + 0.5, n + 0.5, steer);
}

std::pair<double, double> chi_psi(const UnitCell& cell, double u, double v,
                                  const Steering& steer)
{
    const double du = u - steer.u0;
    const double dv = v - steer.v0;
    return {2.0 * kPi * (cell.d1x * du + cell.d1y * dv),
            2.0 * kPi * (cell.d2x * du + cell.d2y * dv)};
}

std::vector<GratingLobe> grating_lobes(const UnitCell& cell, const Steering& steer,
                                       int maxOrder)
{
    assert(maxOrder >= 1);
    std::vector<GratingLobe> lobes;
    lobes.reserve((2 * maxOrder + 1) * (2 * maxOrder + 1) - 1);
    for (int b = -maxOrder; b <= maxOrder; ++b) {
        for (int c = -maxOrder; c <= maxOrder; ++c) {
            if (b == 0 && c == 0)
                continue;
            const double u = steer.u0 + (cell.d2y * b - cell.d1y * c) / cell.nu;
            const double v = steer.v0 + (cell.d1x * c - cell.d2x * b) / cell.nu;
            lobes.push_back(GratingLobe{make_direction(u, v), b, c});
        }
    }
    return lobes;
}

bool is_gl_free(const UnitCell& cell, const Steering& steer)
{
    for (const auto& gl : grating_lobes(cell, steer, 1)) {
        if (std::sqrt(gl.dir.u * gl.dir.u + gl.dir.v * gl.dir.v) <= 1.0)
            return false;
    }
    return true;
}

std::pair<std::pair<double, double>, std::pair<double, double>>
sample_steps(const UnitCell& cell, int P, int Q)
{
    return {{cell.d2y / (P * cell.nu), -cell.d2x / (P * cell.nu)},
            {-cell.d1y / (Q * cell.nu), cell.d1x / (Q * cell.nu)}};
}

} // namespace dsthin
