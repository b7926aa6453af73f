#pragma once

#include <vector>

#include "dsthin/element.hpp"
#include "dsthin/geometry.hpp"
#include "dsthin/pattern.hpp"
#include "dsthin/sequences.hpp"

namespace dsthin {

/// Mainlobe region for SLL measurement. ChiPsiCell excludes the box
/// |chi| < 2 pi r / P and |psi| < 2 pi r / Q around the beam (circular
/// metric); CustomRadius excludes a disk in (u, v) around the steering
/// direction.
struct MainlobeSpec {
    enum class Mode { ChiPsiCell, CustomRadius };
    Mode mode = Mode::ChiPsiCell;
    double cellRadius = 1.0;
    double uRadius = 0.0;
};

struct QuadratureSpec {
    int nTheta = 512;
    int nPhi = 1024;
};

/// Peak-normalized sidelobe level in dB from an oversampled pattern grid.
/// The peak is refined by a 3x3 quadratic fit; the sidelobe maximum is the
/// raw grid maximum outside the mainlobe.
double sll(const PatternGrid& pg, const MainlobeSpec& ml);

/// 3x3 least-squares quadratic refinement of a local maximum on a torus grid;
/// returns the node value when the fit has no nearby interior maximum.
double quadratic_peak_refine(const double* values, int rows, int cols, int k0, int l0);

/// Hemisphere directivity 4 pi P(u0,v0) / integral, midpoint tensor-product
/// quadrature in (theta, phi); deterministic for any worker count.
double directivity(const ExcitationGrid& grid, const UnitCell& cell, const ElementPattern& ep,
                   const Steering& steer, const QuadratureSpec& quad = {});

/// Maximum over phi cuts of the half-power beamwidth theta+ + theta-, in
/// degrees. theta- is taken on the opposite cut phi + 180 deg.
double max_hpbw(const ExcitationGrid& grid, const UnitCell& cell, const ElementPattern& ep,
                const Steering& steer, int phiSteps = 360);

/// 10 log10(P(u,v) / P(u0,v0)) by exact evaluation.
double pattern_value_at(const ExcitationGrid& grid, const UnitCell& cell,
                        const ElementPattern& ep, double u, double v, const Steering& steer);

struct PatternAtEntry {
    Direction dir;
    double db;
};

struct MetricsReport {
    double sllDb;
    double dDb;
    double bwDeg;
    std::vector<PatternAtEntry> patternAt;
};

struct MeasureSettings {
    int oversample = 16;
    MainlobeSpec mainlobe;
    QuadratureSpec quadrature;
    int phiSteps = 360;
};

MetricsReport measure_all(const ExcitationGrid& grid, const UnitCell& cell,
                          const ElementPattern& ep, const Steering& steer,
                          const MeasureSettings& settings,
                          const std::vector<std::pair<double, double>>& patternAt = {});

} // namespace dsthin
