#include "dsthin/element.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsthin/errors.hpp"

namespace dsthin {

ElementPattern ElementPattern::isotropic()
{
    return ElementPattern(Kind::Isotropic);
}

ElementPattern ElementPattern::cosine_y()
{
    return ElementPattern(Kind::CosineY);
}

ElementPattern ElementPattern::tabulated(std::vector<double> uGrid, std::vector<double> vGrid,
                                         std::vector<double> power)
{
    if (uGrid.size() < 2 || vGrid.size() < 2)
        throw std::invalid_argument("ElementPattern::tabulated: need at least a 2x2 table");
    if (power.size() != uGrid.size() * vGrid.size())
        throw std::invalid_argument("ElementPattern::tabulated: table size mismatch");
    if (!std::is_sorted(uGrid.begin(), uGrid.end()) ||
        !std::is_sorted(vGrid.begin(), vGrid.end()))
        throw std::invalid_argument("ElementPattern::tabulated: grids must be ascending");
    for (double p : power)
        if (p < 0.0)
            throw std::invalid_argument("ElementPattern::tabulated: negative power sample");
    ElementPattern ep(Kind::Tabulated);
    ep.uGrid_ = std::move(uGrid);
    ep.vGrid_ = std::move(vGrid);
    ep.table_ = std::move(power);
    return ep;
}

double ElementPattern::power(double u, double v) const
{
    switch (kind_) {
    case Kind::Isotropic:
        return 1.0;
    case Kind::CosineY:
        return std::max(0.0, 1.0 - u * u);
    case Kind::Tabulated: {
        if (u < uGrid_.front() || u > uGrid_.back() || v < vGrid_.front() || v > vGrid_.back())
            throw TabulatedOutOfRange("element table lookup outside hull");
        auto iu = std::upper_bound(uGrid_.begin(), uGrid_.end(), u) - uGrid_.begin();
        auto iv = std::upper_bound(vGrid_.begin(), vGrid_.end(), v) - vGrid_.begin();
        iu = std::clamp<std::ptrdiff_t>(iu, 1, static_cast<std::ptrdiff_t>(uGrid_.size()) - 1);
        iv = std::clamp<std::ptrdiff_t>(iv, 1, static_cast<std::ptrdiff_t>(vGrid_.size()) - 1);
        const double u0 = uGrid_[iu - 1], u1 = uGrid_[iu];
        const double v0 = vGrid_[iv - 1], v1 = vGrid_[iv];
        const double fu = (u - u0) / (u1 - u0);
        const double fv = (v - v0) / (v1 - v0);
        const std::size_t nv = vGrid_.size();
        auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) { return table_[i * nv + j]; };
        return (1 - fu) * (1 - fv) * at(iu - 1, iv - 1) + (1 - fu) * fv * at(iu - 1, iv) +
               fu * (1 - fv) * at(iu, iv - 1) + fu * fv * at(iu, iv);
    }
    }
    return 1.0;
}

} // namespace dsthin
