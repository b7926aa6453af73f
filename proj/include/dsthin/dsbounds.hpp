#pragma once

#include "dsthin/diffsets.hpp"
#include "dsthin/element.hpp"
#include "dsthin/geometry.hpp"
#include "dsthin/metrics.hpp"

namespace dsthin {

/// Mainlobe angular radius entering the directivity lower bound. The default
/// rule asin(1 / sqrt(P Q |nu|)) is the first-null estimate of the equivalent
/// uniform aperture; a calibrated value inverts the bound against a target.
struct ThetaBar {
    enum class Provenance { DefaultRule, User, Calibrated };
    double value;
    Provenance provenance;
};

ThetaBar theta_bar_default(int P, int Q, const UnitCell& cell);
ThetaBar theta_bar_user(double radians);
ThetaBar theta_bar_calibrated(int P, int Q, int H, long long gamma, double dInfTargetDb);

struct SampleLevels {
    double peak;                ///< P_el(u0,v0) * [gamma (PQ-1) + H]
    double offpeak;             ///< H - gamma, before the element factor
    double normalizedOffpeakDb; ///< 10 log10((H-gamma) / [gamma (PQ-1) + H])
};

SampleLevels ds_sample_levels(int P, int Q, int H, long long gamma, const ElementPattern& ep,
                              const Steering& steer);

/// Element-factor scaling: max P_el over the visible off-peak sample
/// directions, relative to P_el at the steering direction.
double epsilon_factor(const ElementPattern& ep, const UnitCell& cell, int P, int Q,
                      const Steering& steer);

struct SllBounds {
    double sllInfDb;
    double sllSupDb;
    double mcRhs; ///< 0.5 + 1.5 log10(PQ)
};

SllBounds sll_bounds(int P, int Q, int H, long long gamma, double epsilon);

double d_inf_db(int P, int Q, int H, long long gamma, const ThetaBar& thetaBar);

double bw_sup_deg(int P, int Q, int H, long long gamma, const ThetaBar& thetaBar);

/// Closed-form midpoint SLL estimate: the phase-weighted kernel sum evaluated
/// at the mid directions outside the discrete mainlobe.
double sll_midpoint_estimate_db(const DifferenceSet& ds, int sx, int sy, const UnitCell& cell,
                                const ElementPattern& ep, const MainlobeSpec& ml,
                                const Steering& steer);

struct BoundsReport {
    double sllInfDb, sllSupDb;
    double dInfDb;
    double bwSupDeg;
    double epsilon;
    double peakLevel, offpeakLevel;
    double mcRhs;
    double thetaBarRad;
};

BoundsReport bounds_report(int P, int Q, int H, long long gamma, const ElementPattern& ep,
                           const UnitCell& cell, const Steering& steer,
                           const ThetaBar& thetaBar);

} // namespace dsthin
