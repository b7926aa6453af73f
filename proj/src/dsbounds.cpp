#include "dsthin/dsbounds.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "dsthin/errors.hpp"
#include "dsthin/pattern.hpp"

namespace dsthin {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_descriptors(int P, int Q, int H, long long gamma)
{
    if (P <= 0 || Q <= 0 || H < 0 || H > P * Q || gamma < 0)
        throw InvalidDescriptors("descriptors out of range");
    const long long lhs = static_cast<long long>(H) * (H - 1);
    const long long rhs = gamma * (static_cast<long long>(P) * Q - 1);
    if (lhs != rhs)
        throw InvalidDescriptors("counting identity H(H-1) = gamma(PQ-1) fails: " +
                                 std::to_string(lhs) + " != " + std::to_string(rhs));
}

double xi_peak(int P, int Q, int H, long long gamma)
{
    return static_cast<double>(gamma) * (static_cast<double>(P) * Q - 1) + H;
}

} // namespace

ThetaBar theta_bar_default(int P, int Q, const UnitCell& cell)
{
    const double pqa = static_cast<double>(P) * Q * std::abs(cell.nu);
    const double s = pqa > 1.0 ? 1.0 / std::sqrt(pqa) : 1.0;
    return ThetaBar{std::asin(s), ThetaBar::Provenance::DefaultRule};
}

ThetaBar theta_bar_user(double radians)
{
    if (!(radians > 0.0 && radians < kPi / 2.0))
        throw InvalidDescriptors("theta_bar must be in (0, pi/2)");
    return ThetaBar{radians, ThetaBar::Provenance::User};
}

ThetaBar theta_bar_calibrated(int P, int Q, int H, long long gamma, double dInfTargetDb)
{
    check_descriptors(P, Q, H, gamma);
    if (gamma == 0)
        throw InvalidDescriptors("theta_bar_calibrated: gamma = 0 leaves no dependence");
    const double dLin = std::pow(10.0, dInfTargetDb / 10.0);
    const double denom = 2.0 * xi_peak(P, Q, H, gamma) / dLin;
    const double oneMinusCos = ((denom - H) / gamma + 1.0) / (static_cast<double>(P) * Q);
    if (!(oneMinusCos > 0.0 && oneMinusCos < 1.0))
        throw InvalidDescriptors("theta_bar_calibrated: target out of reach");
    return ThetaBar{std::acos(1.0 - oneMinusCos), ThetaBar::Provenance::Calibrated};
}

SampleLevels ds_sample_levels(int P, int Q, int H, long long gamma, const ElementPattern& ep,
                              const Steering& steer)
{
    check_descriptors(P, Q, H, gamma);
    const double peakXi = xi_peak(P, Q, H, gamma);
    const double off = static_cast<double>(H) - gamma;
    SampleLevels s;
    s.peak = ep.power(steer.u0, steer.v0) * peakXi;
    s.offpeak = off;
    s.normalizedOffpeakDb =
        off > 0.0 ? 10.0 * std::log10(off / peakXi) : -std::numeric_limits<double>::infinity();
    return s;
}

double epsilon_factor(const ElementPattern& ep, const UnitCell& cell, int P, int Q,
                      const Steering& steer)
{
    const auto [g1, g2] = sample_steps(cell, P, Q);
    const double n1 = std::hypot(g1.first, g1.second);
    const double n2 = std::hypot(g2.first, g2.second);
    const int kMax = static_cast<int>(std::ceil(2.5 / n1)) + 1;
    const int lMax = static_cast<int>(std::ceil(2.5 / n2)) + 1;

    const double peakEl = ep.power(steer.u0, steer.v0);
    double best = -1.0;
    for (int k = -kMax; k <= kMax; ++k) {
        for (int l = -lMax; l <= lMax; ++l) {
            const int km = ((k % P) + P) % P;
            const int lm = ((l % Q) + Q) % Q;
            if (km == 0 && lm == 0)
                continue; // mainlobe sample class
            const double u = steer.u0 + k * g1.first + l * g2.first;
            const double v = steer.v0 + k * g1.second + l * g2.second;
            if (u * u + v * v > 1.0 + 1e-12)
                continue;
            best = std::max(best, ep.power(u, v));
        }
    }
    if (best < 0.0)
        throw NoVisibleSamples("epsilon_factor: no off-peak sample is visible");
    return best / peakEl;
}

SllBounds sll_bounds(int P, int Q, int H, long long gamma, double epsilon)
{
    check_descriptors(P, Q, H, gamma);
    if (epsilon <= 0.0)
        throw InvalidDescriptors("sll_bounds: epsilon must be positive");
    const double peakXi = xi_peak(P, Q, H, gamma);
    const double off = static_cast<double>(H) - gamma;
    const double mcRhs = 0.5 + 1.5 * std::log10(static_cast<double>(P) * Q);
    SllBounds b;
    b.mcRhs = mcRhs;
    b.sllInfDb = 10.0 * std::log10(epsilon * off / peakXi);
    b.sllSupDb = 10.0 * std::log10(epsilon * off * mcRhs / peakXi);
    return b;
}

double d_inf_db(int P, int Q, int H, long long gamma, const ThetaBar& thetaBar)
{
    check_descriptors(P, Q, H, gamma);
    const double oneMinusCos = 1.0 - std::cos(thetaBar.value);
    const double denom =
        gamma * (static_cast<double>(P) * Q * oneMinusCos - 1.0) + static_cast<double>(H);
    return 10.0 * std::log10(2.0 * xi_peak(P, Q, H, gamma) / denom);
}

double bw_sup_deg(int P, int Q, int H, long long gamma, const ThetaBar& thetaBar)
{
    const double dInfLin = std::pow(10.0, d_inf_db(P, Q, H, gamma, thetaBar) / 10.0);
    return 0.886 * std::sqrt(4.0 * kPi / dInfLin) * 180.0 / kPi;
}

double sll_midpoint_estimate_db(const DifferenceSet& ds, int sx, int sy, const UnitCell& cell,
                                const ElementPattern& ep, const MainlobeSpec& ml,
                                const Steering& steer)
{
    const int P = ds.P, Q = ds.Q;
    if (P < 8 && Q < 8)
        throw ApertureTooSmall("sll_midpoint_estimate: needs P >= 8 or Q >= 8");

    const auto grid = to_excitations(ds, sx, sy);
    const auto samples = spectral_samples(grid);

    // kernel tables over centered circular index differences
    std::vector<double> invSinP(P), invSinQ(Q);
    for (int a = 0; a < P; ++a) {
        int c = a <= P / 2 ? a : a - P;
        invSinP[a] = 1.0 / std::sin(kPi * (c + 0.5) / P);
    }
    for (int b = 0; b < Q; ++b) {
        int c = b <= Q / 2 ? b : b - Q;
        invSinQ[b] = 1.0 / std::sin(kPi * (c + 0.5) / Q);
    }

    const double peakXi = xi_peak(P, Q, ds.H, ds.gamma);
    const double off = static_cast<double>(ds.H) - ds.gamma;
    const double pq = static_cast<double>(P) * Q;
    const double peakEl = ep.power(steer.u0, steer.v0);

    std::vector<std::complex<double>> phase(samples.eta.size());
    for (std::size_t i = 0; i < phase.size(); ++i)
        phase[i] = std::polar(1.0, samples.eta[i]);

    double best = -1.0;
    for (int m = 0; m < P; ++m) {
        const double dm = std::min(m + 0.5, P - m - 0.5);
        for (int n = 0; n < Q; ++n) {
            const double dn = std::min(n + 0.5, Q - n - 0.5);
            if (dm < ml.cellRadius || dn < ml.cellRadius)
                continue; // discrete mainlobe strips, as in metrics::sll
            const Direction dir = mid_direction(cell, P, Q, m, n, steer);
            if (!dir.visible)
                continue;
            std::complex<double> sum = 0.0;
            for (int k = 0; k < P; ++k) {
                const double wp = invSinP[(m - k + P) % P];
                std::complex<double> row = 0.0;
                const std::complex<double>* ph = &phase[static_cast<std::size_t>(k) * Q];
                for (int l = 0; l < Q; ++l) {
                    if (k == 0 && l == 0)
                        continue;
                    row += ph[l] * invSinQ[(n - l + Q) % Q];
                }
                sum += wp * row;
            }
            const double est =
                (ep.power(dir.u, dir.v) / peakEl) * off * std::norm(sum) / (pq * pq * peakXi);
            best = std::max(best, est);
        }
    }
    if (best < 0.0)
        throw EmptySidelobeRegion("sll_midpoint_estimate: no visible midpoint outside mainlobe");
    return 10.0 * std::log10(best);
}

BoundsReport bounds_report(int P, int Q, int H, long long gamma, const ElementPattern& ep,
                           const UnitCell& cell, const Steering& steer,
                           const ThetaBar& thetaBar)
{
    BoundsReport r;
    const double eps = epsilon_factor(ep, cell, P, Q, steer);
    const auto lv = ds_sample_levels(P, Q, H, gamma, ep, steer);
    const auto sb = sll_bounds(P, Q, H, gamma, eps);
    r.sllInfDb = sb.sllInfDb;
    r.sllSupDb = sb.sllSupDb;
    r.mcRhs = sb.mcRhs;
    r.epsilon = eps;
    r.peakLevel = lv.peak;
    r.offpeakLevel = lv.offpeak;
    r.dInfDb = d_inf_db(P, Q, H, gamma, thetaBar);
    r.bwSupDeg = bw_sup_deg(P, Q, H, gamma, thetaBar);
    r.thetaBarRad = thetaBar.value;
    return r;
}

} // namespace dsthin
