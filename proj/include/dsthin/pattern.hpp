#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "dsthin/element.hpp"
#include "dsthin/geometry.hpp"
#include "dsthin/sequences.hpp"

namespace dsthin {

/// Array factor |sum alpha_pq exp(j(p chi + q psi))|^2 at a single direction.
double array_factor(const ExcitationGrid& grid, const UnitCell& cell, double u, double v,
                    const Steering& steer);

/// Repeated-evaluation helper: precomputes the active-cell list for binary
/// grids. power() applies the element factor, array_factor() does not.
class PatternEvaluator {
public:
    PatternEvaluator(const ExcitationGrid& grid, const UnitCell& cell,
                     const ElementPattern& ep, const Steering& steer);

    double array_factor(double u, double v) const;
    double array_factor_chi_psi(double chi, double psi) const;
    double power(double u, double v) const;

    double peak() const;             ///< power at the steering direction
    const UnitCell& cell() const { return cell_; }
    const Steering& steer() const { return steer_; }

private:
    UnitCell cell_;
    Steering steer_;
    ElementPattern ep_;
    int P_, Q_;
    bool binary_;
    std::vector<std::pair<int, int>> cells_;
    std::vector<std::complex<double>> weights_;
};

/// Oversampled pattern grid over one (chi, psi) period. Each node carries the
/// array factor, its canonical (minimum-norm) direction in cosine space, and
/// the sidelobe value maximized over visible lattice translates (element
/// factor applied). Invisible nodes have value 0 and sllValue < 0.
struct PatternGrid {
    int P, Q, O;
    UnitCell cell;
    Steering steer;
    std::vector<double> af;
    std::vector<Direction> dir;
    std::vector<double> value;
    std::vector<double> sllValue;
    double peakValue;
    Direction peakDirection;
    std::size_t peakNode;

    int rows() const { return P * O; }
    int cols() const { return Q * O; }
    std::size_t node(int k, int l) const { return static_cast<std::size_t>(k) * cols() + l; }
};

/// Zero-padded FFT evaluation of the pattern over an O-times oversampled
/// (chi, psi) grid.
PatternGrid pattern_grid_fft(const ExcitationGrid& grid, const UnitCell& cell,
                             const ElementPattern& ep, int oversample, const Steering& steer);

struct SamplePrediction {
    int k, l;
    Direction dir;
    double value;
};

/// Pattern samples P(u_kl, v_kl) from the autocorrelation alone (no access to
/// the excitations). Directions are the literal sample map values; row-major
/// (k, l) order.
std::vector<SamplePrediction> predict_samples(const AutocorrGrid& acf, const ElementPattern& ep,
                                              const UnitCell& cell, const Steering& steer);

/// DFT interpolation kernel S(chi, psi); removable singularities evaluate to
/// their limits.
std::complex<double> interp_kernel(double chi, double psi, int P, int Q);

/// Exact trigonometric-polynomial reconstruction of the power pattern at an
/// arbitrary direction from the spectral samples (xi, eta).
double pattern_interpolated(const SpectralSamples& samples, const ElementPattern& ep,
                            const UnitCell& cell, double u, double v, const Steering& steer);

struct McResult {
    std::vector<double> mean;       ///< per direction
    std::vector<double> maxValue;   ///< per direction
    std::vector<double> trialSllDb; ///< per trial: max over directions, dB re peak
};

/// Monte Carlo pattern estimate from the autocorrelation: each trial draws
/// i.i.d. uniform phases (eta_00 pinned to 0) and reconstructs the pattern at
/// the given directions. Deterministic for a fixed seed and any worker count.
McResult pattern_mc(const AutocorrGrid& acf, const ElementPattern& ep, const UnitCell& cell,
                    const Steering& steer, const std::vector<Direction>& directions,
                    std::uint64_t seed, int trials);

} // namespace dsthin
