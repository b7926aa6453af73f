#pragma once

#include <utility>
#include <vector>

namespace dsthin {

/// Lattice unit cell. Axis components are lengths in wavelengths; nu is the
/// signed cell area d1x*d2y - d2x*d1y.
struct UnitCell {
    double d1x, d1y, d2x, d2y;
    double nu;
};

/// Beam steering as direction cosines (u0, v0).
struct Steering {
    double u0 = 0.0;
    double v0 = 0.0;
};

/// A direction in cosine space; visible when u^2 + v^2 <= 1.
struct Direction {
    double u, v;
    bool visible;
};

struct GratingLobe {
    Direction dir;
    int b, c;
};

UnitCell make_unit_cell(double d1x, double d1y, double d2x, double d2y);

Direction make_direction(double u, double v);

Steering steering_from_angles(double theta0Deg, double phi0Deg);

/// Pattern-sample direction (u_kl, v_kl) on the transformed-domain grid.
Direction sample_direction(const UnitCell& cell, int P, int Q, int k, int l,
                           const Steering& steer);

/// Same map with fractional indices; mid_direction is (m + 1/2, n + 1/2).
Direction sample_direction_frac(const UnitCell& cell, int P, int Q, double k, double l,
                                const Steering& steer);

Direction mid_direction(const UnitCell& cell, int P, int Q, int m, int n,
                        const Steering& steer);

/// Transformed-domain coordinates of (u, v): chi = 2*pi*d1.(uv - steer),
/// psi = 2*pi*d2.(uv - steer).
std::pair<double, double> chi_psi(const UnitCell& cell, double u, double v,
                                  const Steering& steer);

/// Grating-lobe directions for all (b, c) in [-maxOrder, maxOrder]^2 \ {(0,0)},
/// ordered b-major then c.
std::vector<GratingLobe> grating_lobes(const UnitCell& cell, const Steering& steer,
                                       int maxOrder);

/// True when every first-order lobe satisfies sqrt(u^2 + v^2) > 1 strictly.
bool is_gl_free(const UnitCell& cell, const Steering& steer);

/// Reciprocal step vectors G1, G2 of the sample map: the (k, l) sample sits at
/// steer + k*G1 + l*G2.
std::pair<std::pair<double, double>, std::pair<double, double>>
sample_steps(const UnitCell& cell, int P, int Q);

} // namespace dsthin
