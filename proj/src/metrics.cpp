#include "dsthin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dsthin/errors.hpp"
#include "dsthin/parallel.hpp"

namespace dsthin {

namespace {

constexpr double kPi = 3.14159265358979323846;

double to_db(double ratio)
{
    if (ratio <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(ratio);
}

// ChiPsiCell excludes the two beam-crossing strips |chi| < 2 pi r / P and
// |psi| < 2 pi r / Q (circular metric). The strips carry the lobes forced by
// the layout's row/column marginals, which the DS sample levels do not
// constrain; the closed-form midpoint machinery places its mainlobe set the
// same way.
bool in_mainlobe(const PatternGrid& pg, int k, int l, const MainlobeSpec& ml)
{
    if (ml.mode == MainlobeSpec::Mode::CustomRadius) {
        const auto& d = pg.dir[pg.node(k, l)];
        const double du = d.u - pg.steer.u0, dv = d.v - pg.steer.v0;
        return du * du + dv * dv < ml.uRadius * ml.uRadius;
    }
    const int rows = pg.rows(), cols = pg.cols();
    const double dk = std::min(k, rows - k);
    const double dl = std::min(l, cols - l);
    return dk < ml.cellRadius * pg.O || dl < ml.cellRadius * pg.O;
}

} // namespace

double quadratic_peak_refine(const double* values, int rows, int cols, int k0, int l0)
{
    double f[3][3];
    for (int dk = -1; dk <= 1; ++dk) {
        for (int dl = -1; dl <= 1; ++dl) {
            const int k = (k0 + dk + rows) % rows;
            const int l = (l0 + dl + cols) % cols;
            f[dk + 1][dl + 1] = values[static_cast<std::size_t>(k) * cols + l];
        }
    }
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Syy = 0, Sxy = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double x = i - 1, y = j - 1, v = f[i][j];
            S += v;
            Sx += x * v;
            Sy += y * v;
            Sxx += x * x * v;
            Syy += y * y * v;
            Sxy += x * y * v;
        }
    }
    const double c0 = (20.0 * S - 12.0 * Sxx - 12.0 * Syy) / 36.0;
    const double c1 = Sx / 6.0;
    const double c2 = Sy / 6.0;
    const double c3 = (-12.0 * S + 18.0 * Sxx) / 36.0;
    const double c4 = (-12.0 * S + 18.0 * Syy) / 36.0;
    const double c5 = Sxy / 4.0;

    const double nodeVal = f[1][1];
    const double det = 4.0 * c3 * c4 - c5 * c5;
    if (c3 >= 0.0 || det <= 0.0)
        return nodeVal;
    const double dx = (-2.0 * c4 * c1 + c5 * c2) / det;
    const double dy = (-2.0 * c3 * c2 + c5 * c1) / det;
    if (std::abs(dx) > 1.5 || std::abs(dy) > 1.5)
        return nodeVal;
    const double refined =
        c0 + c1 * dx + c2 * dy + c3 * dx * dx + c4 * dy * dy + c5 * dx * dy;
    return std::max(nodeVal, refined);
}

double sll(const PatternGrid& pg, const MainlobeSpec& ml)
{
    const int rows = pg.rows(), cols = pg.cols();

    std::size_t peakNode = pg.peakNode;
    if (pg.peakValue < 0.0)
        throw EmptySidelobeRegion("sll: no visible directions on the grid");
    // element-weighted peak with quadratic refinement of the array factor
    const double afRefined = quadratic_peak_refine(
        pg.af.data(), rows, cols, static_cast<int>(peakNode) / cols,
        static_cast<int>(peakNode) % cols);
    const double elemAtPeak =
        pg.af[peakNode] > 0.0 ? pg.sllValue[peakNode] / pg.af[peakNode] : 1.0;
    const double peak = std::max(pg.peakValue, afRefined * elemAtPeak);

    double maxOutside = -1.0;
    double minVisible = std::numeric_limits<double>::max();
    bool anyOutside = false;
    for (int k = 0; k < rows; ++k) {
        for (int l = 0; l < cols; ++l) {
            const double v = pg.sllValue[pg.node(k, l)];
            if (v < 0.0)
                continue; // invisible
            minVisible = std::min(minVisible, v);
            if (in_mainlobe(pg, k, l, ml))
                continue;
            anyOutside = true;
            maxOutside = std::max(maxOutside, v);
        }
    }
    if (!anyOutside)
        throw EmptySidelobeRegion("sll: mainlobe region covers every visible direction");
    if (minVisible >= peak * (1.0 - 1e-9))
        throw EmptySidelobeRegion("sll: flat pattern, no distinct mainlobe");
    return to_db(maxOutside / peak);
}

double directivity(const ExcitationGrid& grid, const UnitCell& cell, const ElementPattern& ep,
                   const Steering& steer, const QuadratureSpec& quad)
{
    const PatternEvaluator eval(grid, cell, ep, steer);
    const double peak = eval.peak();
    const int nt = quad.nTheta, np = quad.nPhi;
    const double dTheta = (kPi / 2.0) / nt;
    const double dPhi = (2.0 * kPi) / np;

    std::vector<double> rowSum(nt, 0.0);
    workers();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nt; ++i) {
        const double theta = (i + 0.5) * dTheta;
        const double st = std::sin(theta);
        double acc = 0.0;
        for (int j = 0; j < np; ++j) {
            const double phi = (j + 0.5) * dPhi;
            const double u = st * std::cos(phi);
            const double v = st * std::sin(phi);
            acc += eval.power(u, v);
        }
        rowSum[i] = acc * st;
    }
    double integral = 0.0;
    for (int i = 0; i < nt; ++i)
        integral += rowSum[i];
    integral *= dTheta * dPhi;
    return to_db(4.0 * kPi * peak / integral);
}

namespace {

// First -3 dB crossing along the cut (u,v) = steer + sin(theta) (cos phi, sin phi).
double half_power_theta(const PatternEvaluator& eval, double phi, double halfPeak)
{
    const double cp = std::cos(phi), sp = std::sin(phi);
    const Steering& s0 = eval.steer();
    auto powerAt = [&](double theta) {
        const double r = std::sin(theta);
        return eval.power(s0.u0 + r * cp, s0.v0 + r * sp);
    };
    const double step = 0.25 * kPi / 180.0;
    double lo = 0.0;
    double hi = 0.0;
    bool bracketed = false;
    for (double theta = step; theta <= kPi / 2.0 + 1e-12; theta += step) {
        const double r = std::sin(theta);
        const double u = s0.u0 + r * cp, v = s0.v0 + r * sp;
        if (u * u + v * v > 1.0)
            break;
        if (powerAt(theta) < halfPeak) {
            lo = theta - step;
            hi = theta;
            bracketed = true;
            break;
        }
    }
    if (!bracketed)
        throw BeamNotResolved("max_hpbw: no -3 dB crossing before the visible edge");
    for (int it = 0; it < 40 && hi - lo > 1e-7; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (powerAt(mid) >= halfPeak)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double max_hpbw(const ExcitationGrid& grid, const UnitCell& cell, const ElementPattern& ep,
                const Steering& steer, int phiSteps)
{
    const PatternEvaluator eval(grid, cell, ep, steer);
    const double halfPeak = 0.5 * eval.peak();

    std::vector<double> bw(phiSteps, 0.0);
    workers();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < phiSteps; ++i) {
        const double phi = i * kPi / phiSteps;
        bw[i] = half_power_theta(eval, phi, halfPeak) +
                half_power_theta(eval, phi + kPi, halfPeak);
    }
    double best = 0.0;
    for (double b : bw)
        best = std::max(best, b);
    return best * 180.0 / kPi;
}

double pattern_value_at(const ExcitationGrid& grid, const UnitCell& cell,
                        const ElementPattern& ep, double u, double v, const Steering& steer)
{
    if (u * u + v * v > 1.0 + 1e-12)
        throw InvisibleDirection("pattern_value_at: direction outside the visible region");
    const PatternEvaluator eval(grid, cell, ep, steer);
    return to_db(eval.power(u, v) / eval.peak());
}

MetricsReport measure_all(const ExcitationGrid& grid, const UnitCell& cell,
                          const ElementPattern& ep, const Steering& steer,
                          const MeasureSettings& settings,
                          const std::vector<std::pair<double, double>>& patternAt)
{
    MetricsReport r;
    const auto pg = pattern_grid_fft(grid, cell, ep, settings.oversample, steer);
    r.sllDb = sll(pg, settings.mainlobe);
    r.dDb = directivity(grid, cell, ep, steer, settings.quadrature);
    r.bwDeg = max_hpbw(grid, cell, ep, steer, settings.phiSteps);
    for (const auto& [u, v] : patternAt)
        r.patternAt.push_back(
            PatternAtEntry{make_direction(u, v), pattern_value_at(grid, cell, ep, u, v, steer)});
    return r;
}

} // namespace dsthin
