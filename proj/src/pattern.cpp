#include "dsthin/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dsthin/fft.hpp"
#include "dsthin/parallel.hpp"

namespace dsthin {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kSingularTol = 1e-8;

// sin(N x / 2) / (N sin(x / 2)) with the limit (+-1) across the x = 2 pi M
// singularities.
double dirichlet(double x, int N)
{
    const double s = std::sin(0.5 * x);
    if (std::abs(s) < kSingularTol) {
        const long m = std::lround(x / kTwoPi);
        return (m * static_cast<long>(N - 1)) % 2 == 0 ? 1.0 : -1.0;
    }
    return std::sin(0.5 * N * x) / (N * s);
}

std::complex<double> kernel_axis(double x, int N)
{
    return std::polar(dirichlet(x, N), 0.5 * x * (N - 1));
}

} // namespace

double array_factor(const ExcitationGrid& grid, const UnitCell& cell, double u, double v,
                    const Steering& steer)
{
    const auto [chi, psi] = chi_psi(cell, u, v, steer);
    const int P = grid.P(), Q = grid.Q();
    const std::complex<double> ex = std::polar(1.0, chi);
    const std::complex<double> ey = std::polar(1.0, psi);
    std::complex<double> sum = 0.0;
    std::complex<double> xp = 1.0;
    for (int p = 0; p < P; ++p) {
        std::complex<double> row = 0.0;
        std::complex<double> yq = 1.0;
        for (int q = 0; q < Q; ++q) {
            row += grid.at(p, q) * yq;
            yq *= ey;
        }
        sum += xp * row;
        xp *= ex;
    }
    return std::norm(sum);
}

PatternEvaluator::PatternEvaluator(const ExcitationGrid& grid, const UnitCell& cell,
                                   const ElementPattern& ep, const Steering& steer)
    : cell_(cell), steer_(steer), ep_(ep), P_(grid.P()), Q_(grid.Q()),
      binary_(grid.is_binary())
{
    if (binary_)
        cells_ = grid.active_cells();
    else
        weights_ = grid.weights();
}

double PatternEvaluator::array_factor_chi_psi(double chi, double psi) const
{
    // per-index phase tables
    std::vector<std::complex<double>> ex(P_), ey(Q_);
    const std::complex<double> sx = std::polar(1.0, chi);
    const std::complex<double> sy = std::polar(1.0, psi);
    ex[0] = 1.0;
    for (int p = 1; p < P_; ++p)
        ex[p] = ex[p - 1] * sx;
    ey[0] = 1.0;
    for (int q = 1; q < Q_; ++q)
        ey[q] = ey[q - 1] * sy;

    std::complex<double> sum = 0.0;
    if (binary_) {
        for (const auto& [p, q] : cells_)
            sum += ex[p] * ey[q];
    } else {
        for (int p = 0; p < P_; ++p) {
            std::complex<double> row = 0.0;
            const std::complex<double>* w = &weights_[static_cast<std::size_t>(p) * Q_];
            for (int q = 0; q < Q_; ++q)
                row += w[q] * ey[q];
            sum += ex[p] * row;
        }
    }
    return std::norm(sum);
}

double PatternEvaluator::array_factor(double u, double v) const
{
    const auto [chi, psi] = chi_psi(cell_, u, v, steer_);
    return array_factor_chi_psi(chi, psi);
}

double PatternEvaluator::power(double u, double v) const
{
    return array_factor(u, v) * ep_.power(u, v);
}

double PatternEvaluator::peak() const
{
    return power(steer_.u0, steer_.v0);
}

PatternGrid pattern_grid_fft(const ExcitationGrid& grid, const UnitCell& cell,
                             const ElementPattern& ep, int oversample, const Steering& steer)
{
    const int P = grid.P(), Q = grid.Q(), O = oversample;
    const int rows = P * O, cols = Q * O;
    const std::size_t n = static_cast<std::size_t>(rows) * cols;

    PatternGrid pg;
    pg.P = P;
    pg.Q = Q;
    pg.O = O;
    pg.cell = cell;
    pg.steer = steer;
    pg.af.assign(n, 0.0);
    pg.dir.assign(n, Direction{0, 0, false});
    pg.value.assign(n, 0.0);
    pg.sllValue.assign(n, -1.0);

    // zero-padded spectrum: A(chi_k', psi_l') with chi = 2 pi k' / (O P)
    std::vector<std::complex<double>> padded(n, {0.0, 0.0});
    for (int p = 0; p < P; ++p)
        for (int q = 0; q < Q; ++q)
            padded[static_cast<std::size_t>(p) * cols + q] = grid.at(p, q);
    Fft2D fft(rows, cols);
    auto F = fft.backward(padded);
    for (std::size_t i = 0; i < n; ++i)
        pg.af[i] = std::norm(F[i]);

    // Direction mapping: node -> steer + (k/O) G1 + (l/O) G2 reduced by the
    // translate lattice e1 = P G1, e2 = Q G2 to the canonical min-norm copy.
    const auto [g1, g2] = sample_steps(cell, P, Q);
    const double e1x = P * g1.first, e1y = P * g1.second;
    const double e2x = Q * g2.first, e2y = Q * g2.second;
    const double det = e1x * e2y - e2x * e1y;

    workers();
#pragma omp parallel for schedule(static)
    for (int k = 0; k < rows; ++k) {
        for (int l = 0; l < cols; ++l) {
            const std::size_t id = pg.node(k, l);
            const double bx = steer.u0 + (static_cast<double>(k) / O) * g1.first +
                              (static_cast<double>(l) / O) * g2.first;
            const double by = steer.v0 + (static_cast<double>(k) / O) * g1.second +
                              (static_cast<double>(l) / O) * g2.second;
            // real solution of x + a e1 + b e2 = 0
            const double ar = (-bx * e2y + by * e2x) / det;
            const double br = (-by * e1x + bx * e1y) / det;
            const int a0 = static_cast<int>(std::lround(ar));
            const int b0 = static_cast<int>(std::lround(br));

            double bestNorm = 1e300;
            double bestU = bx, bestV = by;
            double bestVis = -1.0;
            for (int da = -3; da <= 3; ++da) {
                for (int db = -3; db <= 3; ++db) {
                    const double u = bx + (a0 + da) * e1x + (b0 + db) * e2x;
                    const double v = by + (a0 + da) * e1y + (b0 + db) * e2y;
                    const double norm2 = u * u + v * v;
                    if (norm2 < bestNorm - 1e-15) {
                        bestNorm = norm2;
                        bestU = u;
                        bestV = v;
                    }
                    if (norm2 <= 1.0 + 1e-12) {
                        const double val = pg.af[id] * ep.power(u, v);
                        bestVis = std::max(bestVis, val);
                    }
                }
            }
            pg.dir[id] = make_direction(bestU, bestV);
            pg.sllValue[id] = bestVis;
            pg.value[id] = pg.dir[id].visible ? pg.af[id] * ep.power(bestU, bestV) : 0.0;
        }
    }

    pg.peakValue = -1.0;
    pg.peakNode = 0;
    pg.peakDirection = Direction{steer.u0, steer.v0, true};
    for (std::size_t i = 0; i < n; ++i) {
        if (pg.sllValue[i] > pg.peakValue) {
            pg.peakValue = pg.sllValue[i];
            pg.peakNode = i;
            pg.peakDirection = pg.dir[i];
        }
    }
    return pg;
}

std::vector<SamplePrediction> predict_samples(const AutocorrGrid& acf, const ElementPattern& ep,
                                              const UnitCell& cell, const Steering& steer)
{
    const int P = acf.P, Q = acf.Q;
    const auto xi = xi_from_autocorrelation(acf);
    std::vector<SamplePrediction> out;
    out.reserve(xi.size());
    for (int k = 0; k < P; ++k) {
        for (int l = 0; l < Q; ++l) {
            const Direction d = sample_direction(cell, P, Q, k, l, steer);
            const double xiKl = xi[static_cast<std::size_t>(k) * Q + l];
            out.push_back(SamplePrediction{k, l, d, xiKl * ep.power(d.u, d.v)});
        }
    }
    return out;
}

std::complex<double> interp_kernel(double chi, double psi, int P, int Q)
{
    return kernel_axis(chi, P) * kernel_axis(psi, Q);
}

namespace {

// field = sum_kl coef_kl S(chi - 2 pi k / P, psi - 2 pi l / Q), factorized
// into per-row and per-column kernel terms.
std::complex<double> interp_field(int P, int Q, const std::complex<double>* coef, double chi,
                                  double psi)
{
    std::vector<std::complex<double>> rowK(P), colK(Q);
    for (int k = 0; k < P; ++k)
        rowK[k] = kernel_axis(chi - kTwoPi * k / P, P);
    for (int l = 0; l < Q; ++l)
        colK[l] = kernel_axis(psi - kTwoPi * l / Q, Q);
    std::complex<double> sum = 0.0;
    for (int k = 0; k < P; ++k) {
        std::complex<double> row = 0.0;
        const std::complex<double>* c = coef + static_cast<std::size_t>(k) * Q;
        for (int l = 0; l < Q; ++l)
            row += c[l] * colK[l];
        sum += rowK[k] * row;
    }
    return sum;
}

} // namespace

double pattern_interpolated(const SpectralSamples& samples, const ElementPattern& ep,
                            const UnitCell& cell, double u, double v, const Steering& steer)
{
    const int P = samples.P, Q = samples.Q;
    std::vector<std::complex<double>> coef(samples.xi.size());
    for (std::size_t i = 0; i < coef.size(); ++i)
        coef[i] = std::polar(std::sqrt(std::max(0.0, samples.xi[i])), samples.eta[i]);
    const auto [chi, psi] = chi_psi(cell, u, v, steer);
    return std::norm(interp_field(P, Q, coef.data(), chi, psi)) * ep.power(u, v);
}

McResult pattern_mc(const AutocorrGrid& acf, const ElementPattern& ep, const UnitCell& cell,
                    const Steering& steer, const std::vector<Direction>& directions,
                    std::uint64_t seed, int trials)
{
    const int P = acf.P, Q = acf.Q;
    const auto xi = xi_from_autocorrelation(acf);
    std::vector<double> xiSqrt(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
        xiSqrt[i] = std::sqrt(std::max(0.0, xi[i]));
    const double peak = xi[0] * ep.power(steer.u0, steer.v0);

    const std::size_t nd = directions.size();
    std::vector<std::pair<double, double>> chipsi(nd);
    std::vector<double> elem(nd);
    for (std::size_t i = 0; i < nd; ++i) {
        chipsi[i] = chi_psi(cell, directions[i].u, directions[i].v, steer);
        elem[i] = ep.power(directions[i].u, directions[i].v);
    }

    std::vector<double> values(static_cast<std::size_t>(trials) * nd);
    workers();
#pragma omp parallel for schedule(static)
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(mix64(mix64(seed) + static_cast<std::uint64_t>(t)));
        std::vector<std::complex<double>> coef(xiSqrt.size());
        for (int k = 0; k < P; ++k) {
            for (int l = 0; l < Q; ++l) {
                const std::size_t i = static_cast<std::size_t>(k) * Q + l;
                double eta = 0.0;
                if (k != 0 || l != 0)
                    eta = kTwoPi * ((rng() >> 11) * 0x1.0p-53);
                coef[i] = std::polar(xiSqrt[i], eta);
            }
        }
        for (std::size_t i = 0; i < nd; ++i) {
            const double a = std::norm(interp_field(P, Q, coef.data(), chipsi[i].first,
                                                    chipsi[i].second));
            values[static_cast<std::size_t>(t) * nd + i] = a * elem[i];
        }
    }

    McResult res;
    res.mean.assign(nd, 0.0);
    res.maxValue.assign(nd, 0.0);
    res.trialSllDb.assign(trials, 0.0);
    for (int t = 0; t < trials; ++t) {
        double worst = 0.0;
        for (std::size_t i = 0; i < nd; ++i) {
            const double v = values[static_cast<std::size_t>(t) * nd + i];
            res.mean[i] += v;
            res.maxValue[i] = std::max(res.maxValue[i], v);
            worst = std::max(worst, v);
        }
        res.trialSllDb[t] = 10.0 * std::log10(std::max(worst / peak, 1e-300));
    }
    for (std::size_t i = 0; i < nd; ++i)
        res.mean[i] /= trials;
    return res;
}

} // namespace dsthin
