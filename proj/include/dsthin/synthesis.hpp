#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsthin/dsbounds.hpp"
#include "dsthin/diffsets.hpp"
#include "dsthin/element.hpp"
#include "dsthin/geometry.hpp"
#include "dsthin/metrics.hpp"

namespace dsthin {

/// Search box for the unit-cell components, scanned on a uniform grid.
struct CellBox {
    double d1xMin = 0.05, d1xMax = 0.75;
    double d1yMin = 0.05, d1yMax = 0.75;
    double d2xMin = 0.05, d2xMax = 0.75;
    double d2yMin = 0.05, d2yMax = 0.75;
    int scanSteps = 61;
    double nuMin = 0.05; ///< reject sliver cells below this |nu|
};

struct ThetaBarSpec {
    enum class Mode { DefaultRule, Fixed, CalibrateDInf };
    Mode mode = Mode::DefaultRule;
    double value = 0.0; ///< radians for Fixed, target D_INF dB for CalibrateDInf
};

struct PatternTarget {
    double uT, vT;
    double pDb; ///< ceiling in dB relative to the pattern peak
};

struct SynthesisSpec {
    double sllT;
    double dT;
    double bwT;
    PatternTarget target;
    Steering steer;
    ElementPattern element = ElementPattern::isotropic();
    CellBox box;
    int mnMax = 0; ///< 0: derived from the box and target
    ThetaBarSpec thetaBar;
    int oversampleScreen = 8;
    int oversampleFinal = 16;
    MainlobeSpec mainlobe;
    QuadratureSpec quadrature;
    int phiSteps = 360;
    int maxLatticeTries = 24;
    bool sweepFullMetrics = false;
};

struct CatalogEntry {
    std::string name;
    DifferenceSet ds;
};

struct Step1Candidate {
    std::size_t catalogIndex;
    SllBounds bounds;
};

/// Catalog entries whose SLL_SUP (with the given epsilon estimate) meets the
/// target, ascending by SLL_SUP. An empty result is a valid outcome.
std::vector<Step1Candidate> step1_select(const std::vector<CatalogEntry>& catalog, double sllT,
                                         double epsilonEstimate);

struct LatticeChoice {
    UnitCell cell;
    int m, n;
    double residual; ///< |sample(m,n) - target| in (u, v)
};

/// Lattices hitting the pattern target at an integer sample (m, n), GL-free,
/// within the box; ranked by |nu| descending. Throws ElementInadmissible when
/// the target level is unreachable for this set and element, and
/// NoFeasibleLattice when the scan comes up empty.
std::vector<LatticeChoice> step2_lattices(const DifferenceSet& ds, const PatternTarget& target,
                                          const ElementPattern& element, int mnMax,
                                          const CellBox& box, const Steering& steer);

LatticeChoice step2_lattice(const DifferenceSet& ds, const PatternTarget& target,
                            const ElementPattern& element, int mnMax, const CellBox& box,
                            const Steering& steer);

struct Step3Report {
    bool pass;
    double dInfDb, bwSupDeg;
    double dMarginDb, bwMarginDeg;
};

Step3Report step3_check(const DifferenceSet& ds, const UnitCell& cell, const ThetaBar& thetaBar,
                        double dT, double bwT);

struct ShiftRow {
    int sigma, sx, sy;
    double sllDb;
    std::optional<double> dDb;
    std::optional<double> bwDeg;
};

struct SweepSettings {
    int oversampleScreen = 8;
    int oversampleFinal = 16;
    MainlobeSpec mainlobe;
    bool fullMetrics = false;
    QuadratureSpec quadrature;
    int phiSteps = 360;
};

struct SweepResult {
    std::vector<ShiftRow> rows; ///< sigma = sx * Q + sy, ascending
    int sigmaOpt;
};

/// SLL over every cyclic shift (FFT screening, top 5% re-checked at the final
/// oversampling); optionally D and BW per shift. Deterministic, parallel over
/// shifts.
SweepResult step4_shift_sweep(const DifferenceSet& ds, const UnitCell& cell,
                              const ElementPattern& element, const Steering& steer,
                              const SweepSettings& settings);

struct ConstraintCheck {
    std::string name;
    double target;
    double value;
    bool met;
};

struct SynthesisResult {
    bool success = false;
    std::string dsName;
    DifferenceSet ds;
    UnitCell cell{0.5, 0, 0, 0.5, 0.25};
    int m = 0, n = 0;
    int sigmaOpt = 0, sigmaX = 0, sigmaY = 0;
    BoundsReport bounds{};
    MetricsReport measured{};
    std::vector<ConstraintCheck> constraints;
    std::vector<ShiftRow> perShift;
    std::vector<std::string> diagnostics;
};

/// The four-step pipeline with backtracking: next lattice on a step-3 or
/// measured-constraint failure, next catalog candidate on exhaustion.
/// Throws Infeasible (carrying the diagnostic trace) when everything fails.
SynthesisResult synthesize(const SynthesisSpec& spec, const std::vector<CatalogEntry>& catalog);

} // namespace dsthin
