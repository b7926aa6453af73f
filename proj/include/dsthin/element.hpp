#pragma once

#include <memory>
#include <vector>

namespace dsthin {

/// Embedded element power pattern P_el(u, v). The cosine model is the
/// y-directed half-wave dipole approximation, field sqrt(1 - u^2), evaluated
/// directly in power (clamped at 0 beyond |u| = 1).
class ElementPattern {
public:
    enum class Kind { Isotropic, CosineY, Tabulated };

    static ElementPattern isotropic();
    static ElementPattern cosine_y();
    /// Power samples on a rectangular (u, v) grid, bilinear lookup between
    /// nodes. Throws TabulatedOutOfRange outside the table hull.
    static ElementPattern tabulated(std::vector<double> uGrid, std::vector<double> vGrid,
                                    std::vector<double> power);

    double power(double u, double v) const;
    Kind kind() const { return kind_; }

private:
    ElementPattern(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<double> uGrid_, vGrid_, table_;
};

} // namespace dsthin
