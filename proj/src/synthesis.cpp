#include "dsthin/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsthin/errors.hpp"
#include "dsthin/fft.hpp"
#include "dsthin/parallel.hpp"
#include "dsthin/pattern.hpp"

namespace dsthin {

namespace {

constexpr double kEq44Residual = 1e-6;

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

} // namespace

std::vector<Step1Candidate> step1_select(const std::vector<CatalogEntry>& catalog, double sllT,
                                         double epsilonEstimate)
{
    std::vector<Step1Candidate> out;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto& ds = catalog[i].ds;
        const auto b = sll_bounds(ds.P, ds.Q, ds.H, ds.gamma, epsilonEstimate);
        if (b.sllSupDb <= sllT)
            out.push_back(Step1Candidate{i, b});
    }
    std::stable_sort(out.begin(), out.end(), [](const Step1Candidate& a, const Step1Candidate& b) {
        return a.bounds.sllSupDb < b.bounds.sllSupDb;
    });
    return out;
}

namespace {

// Axis solutions of d . T = target with components confined to the box,
// scanned on the box grid. T is the steering-relative target offset.
std::vector<std::pair<double, double>> axis_line_solutions(double Tu, double Tv, double target,
                                                           double xMin, double xMax, double yMin,
                                                           double yMax, int steps)
{
    std::vector<std::pair<double, double>> out;
    const double eps = 1e-12;
    if (std::abs(Tv) > eps) {
        for (int i = 0; i < steps; ++i) {
            const double x = xMin + (xMax - xMin) * i / (steps - 1);
            const double y = (target - x * Tu) / Tv;
            if (y >= yMin - 1e-12 && y <= yMax + 1e-12)
                out.emplace_back(x, std::clamp(y, yMin, yMax));
        }
    } else if (std::abs(Tu) > eps) {
        const double x = target / Tu;
        if (x >= xMin - 1e-12 && x <= xMax + 1e-12) {
            for (int i = 0; i < steps; ++i) {
                const double y = yMin + (yMax - yMin) * i / (steps - 1);
                out.emplace_back(std::clamp(x, xMin, xMax), y);
            }
        }
    }
    return out;
}

} // namespace

std::vector<LatticeChoice> step2_lattices(const DifferenceSet& ds, const PatternTarget& target,
                                          const ElementPattern& element, int mnMax,
                                          const CellBox& box, const Steering& steer)
{
    const int P = ds.P, Q = ds.Q;

    // Eq.-43 admissibility: the sample level at the target direction must not
    // exceed the requested ceiling.
    const double xiPeak =
        static_cast<double>(ds.gamma) * (static_cast<double>(P) * Q - 1) + ds.H;
    const double lhs = (ds.H - ds.gamma) * element.power(target.uT, target.vT);
    const double rhs =
        db_to_linear(target.pDb) * element.power(steer.u0, steer.v0) * xiPeak;
    if (lhs > rhs)
        throw ElementInadmissible("step2: (H-gamma) P_el(uT,vT) = " + std::to_string(lhs) +
                                  " exceeds the target level " + std::to_string(rhs));

    const double Tu = target.uT - steer.u0;
    const double Tv = target.vT - steer.v0;
    if (std::abs(Tu) < 1e-12 && std::abs(Tv) < 1e-12)
        throw NoFeasibleLattice("step2: target coincides with the steering direction");

    const int mMax = mnMax > 0 ? mnMax : P;
    const int nMax = mnMax > 0 ? mnMax : Q;

    std::vector<LatticeChoice> out;
    for (int m = -mMax; m <= mMax; ++m) {
        if (m == 0)
            continue;
        const auto d1s =
            axis_line_solutions(Tu, Tv, static_cast<double>(m) / P, box.d1xMin, box.d1xMax,
                                box.d1yMin, box.d1yMax, box.scanSteps);
        if (d1s.empty())
            continue;
        for (int n = -nMax; n <= nMax; ++n) {
            if (n == 0)
                continue;
            const auto d2s =
                axis_line_solutions(Tu, Tv, static_cast<double>(n) / Q, box.d2xMin, box.d2xMax,
                                    box.d2yMin, box.d2yMax, box.scanSteps);
            for (const auto& [d1x, d1y] : d1s) {
                for (const auto& [d2x, d2y] : d2s) {
                    const double nu = d1x * d2y - d2x * d1y;
                    if (std::abs(nu) < box.nuMin)
                        continue;
                    const UnitCell cell{d1x, d1y, d2x, d2y, nu};
                    if (!is_gl_free(cell, steer))
                        continue;
                    const Direction hit = sample_direction_frac(cell, P, Q, m, n, steer);
                    const double res = std::hypot(hit.u - target.uT, hit.v - target.vT);
                    if (res > kEq44Residual)
                        continue;
                    out.push_back(LatticeChoice{cell, m, n, res});
                }
            }
        }
    }
    if (out.empty())
        throw NoFeasibleLattice("step2: no GL-free cell in the box hits the target sample");
    std::stable_sort(out.begin(), out.end(), [](const LatticeChoice& a, const LatticeChoice& b) {
        return std::abs(a.cell.nu) > std::abs(b.cell.nu);
    });
    return out;
}

LatticeChoice step2_lattice(const DifferenceSet& ds, const PatternTarget& target,
                            const ElementPattern& element, int mnMax, const CellBox& box,
                            const Steering& steer)
{
    return step2_lattices(ds, target, element, mnMax, box, steer).front();
}

Step3Report step3_check(const DifferenceSet& ds, const UnitCell& cell, const ThetaBar& thetaBar,
                        double dT, double bwT)
{
    (void)cell;
    Step3Report r;
    r.dInfDb = d_inf_db(ds.P, ds.Q, ds.H, ds.gamma, thetaBar);
    r.bwSupDeg = bw_sup_deg(ds.P, ds.Q, ds.H, ds.gamma, thetaBar);
    r.dMarginDb = r.dInfDb - dT;
    r.bwMarginDeg = bwT - r.bwSupDeg;
    r.pass = r.dMarginDb >= 0.0 && r.bwMarginDeg >= 0.0;
    return r;
}

namespace {

// Shift-independent node data for the sweep: element weighting of the best
// visible translate and the sidelobe-region mask.
struct SweepGeometry {
    int rows, cols, O;
    std::vector<double> pelMax;   // < 0 when no visible translate
    std::vector<std::uint8_t> outside;
    double pelPeak;

    std::size_t node(int k, int l) const { return static_cast<std::size_t>(k) * cols + l; }
};

SweepGeometry make_sweep_geometry(int P, int Q, int O, const UnitCell& cell,
                                  const ElementPattern& ep, const Steering& steer,
                                  const MainlobeSpec& ml)
{
    SweepGeometry g;
    g.rows = P * O;
    g.cols = Q * O;
    g.O = O;
    g.pelMax.assign(static_cast<std::size_t>(g.rows) * g.cols, -1.0);
    g.outside.assign(g.pelMax.size(), 0);
    g.pelPeak = ep.power(steer.u0, steer.v0);

    const auto [g1, g2] = sample_steps(cell, P, Q);
    const double e1x = P * g1.first, e1y = P * g1.second;
    const double e2x = Q * g2.first, e2y = Q * g2.second;
    const double det = e1x * e2y - e2x * e1y;

    for (int k = 0; k < g.rows; ++k) {
        for (int l = 0; l < g.cols; ++l) {
            const double bx = steer.u0 + (static_cast<double>(k) / O) * g1.first +
                              (static_cast<double>(l) / O) * g2.first;
            const double by = steer.v0 + (static_cast<double>(k) / O) * g1.second +
                              (static_cast<double>(l) / O) * g2.second;
            const double ar = (-bx * e2y + by * e2x) / det;
            const double br = (-by * e1x + bx * e1y) / det;
            const int a0 = static_cast<int>(std::lround(ar));
            const int b0 = static_cast<int>(std::lround(br));
            double best = -1.0;
            for (int da = -3; da <= 3; ++da) {
                for (int db = -3; db <= 3; ++db) {
                    const double u = bx + (a0 + da) * e1x + (b0 + db) * e2x;
                    const double v = by + (a0 + da) * e1y + (b0 + db) * e2y;
                    if (u * u + v * v <= 1.0 + 1e-12)
                        best = std::max(best, ep.power(u, v));
                }
            }
            const std::size_t id = g.node(k, l);
            g.pelMax[id] = best;
            if (best >= 0.0) {
                bool inML;
                if (ml.mode == MainlobeSpec::Mode::CustomRadius) {
                    const double du = bx - steer.u0, dv = by - steer.v0;
                    inML = du * du + dv * dv < ml.uRadius * ml.uRadius;
                } else {
                    // same strip rule as metrics::sll
                    const double dk = std::min(k, g.rows - k);
                    const double dl = std::min(l, g.cols - l);
                    inML = dk < ml.cellRadius * O || dl < ml.cellRadius * O;
                }
                g.outside[id] = inML ? 0 : 1;
            }
        }
    }
    return g;
}

// SLL of one shifted layout from its oversampled array factor. The DS peak is
// the refined chi-psi origin node.
double sweep_sll(const SweepGeometry& g, const std::vector<double>& af)
{
    double maxOut = -1.0;
    for (std::size_t i = 0; i < af.size(); ++i) {
        if (!g.outside[i])
            continue;
        const double v = af[i] * g.pelMax[i];
        maxOut = std::max(maxOut, v);
    }
    const double peakAf = quadratic_peak_refine(af.data(), g.rows, g.cols, 0, 0);
    return 10.0 * std::log10(maxOut / (peakAf * g.pelPeak));
}

} // namespace

SweepResult step4_shift_sweep(const DifferenceSet& ds, const UnitCell& cell,
                              const ElementPattern& element, const Steering& steer,
                              const SweepSettings& settings)
{
    const int P = ds.P, Q = ds.Q;
    const int total = P * Q;
    const auto screenGeom =
        make_sweep_geometry(P, Q, settings.oversampleScreen, cell, element, steer,
                            settings.mainlobe);

    std::vector<double> screenSll(total);
    workers();
#pragma omp parallel
    {
        Fft2D fft(screenGeom.rows, screenGeom.cols);
        std::vector<std::complex<double>> padded(screenSll.size() ? static_cast<std::size_t>(
                                                                        screenGeom.rows) *
                                                                        screenGeom.cols
                                                                  : 0);
        std::vector<std::complex<double>> F(padded.size());
        std::vector<double> af(padded.size());
#pragma omp for schedule(static)
        for (int sigma = 0; sigma < total; ++sigma) {
            const int sx = sigma / Q, sy = sigma % Q;
            const auto grid = to_excitations(ds, sx, sy);
            std::fill(padded.begin(), padded.end(), std::complex<double>(0.0, 0.0));
            for (const auto& [p, q] : grid.active_cells())
                padded[static_cast<std::size_t>(p) * screenGeom.cols + q] = 1.0;
            fft.backward(padded.data(), F.data());
            for (std::size_t i = 0; i < F.size(); ++i)
                af[i] = std::norm(F[i]);
            screenSll[sigma] = sweep_sll(screenGeom, af);
        }
    }

    // refine the best 5% at the final oversampling
    std::vector<int> order(total);
    for (int i = 0; i < total; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (screenSll[a] != screenSll[b])
            return screenSll[a] < screenSll[b];
        return a < b;
    });
    const int refineCount =
        std::min(total, std::max(1, static_cast<int>(std::ceil(0.05 * total))));

    std::vector<double> finalSll = screenSll;
    if (settings.oversampleFinal != settings.oversampleScreen) {
        const auto finalGeom =
            make_sweep_geometry(P, Q, settings.oversampleFinal, cell, element, steer,
                                settings.mainlobe);
#pragma omp parallel
        {
            Fft2D fft(finalGeom.rows, finalGeom.cols);
            std::vector<std::complex<double>> padded(
                static_cast<std::size_t>(finalGeom.rows) * finalGeom.cols);
            std::vector<std::complex<double>> F(padded.size());
            std::vector<double> af(padded.size());
#pragma omp for schedule(static)
            for (int r = 0; r < refineCount; ++r) {
                const int sigma = order[r];
                const int sx = sigma / Q, sy = sigma % Q;
                const auto grid = to_excitations(ds, sx, sy);
                std::fill(padded.begin(), padded.end(), std::complex<double>(0.0, 0.0));
                for (const auto& [p, q] : grid.active_cells())
                    padded[static_cast<std::size_t>(p) * finalGeom.cols + q] = 1.0;
                fft.backward(padded.data(), F.data());
                for (std::size_t i = 0; i < F.size(); ++i)
                    af[i] = std::norm(F[i]);
                finalSll[sigma] = sweep_sll(finalGeom, af);
            }
        }
    }

    SweepResult res;
    res.rows.resize(total);
    int best = 0;
    for (int sigma = 0; sigma < total; ++sigma) {
        ShiftRow row;
        row.sigma = sigma;
        row.sx = sigma / Q;
        row.sy = sigma % Q;
        row.sllDb = finalSll[sigma];
        res.rows[sigma] = row;
        if (finalSll[sigma] < finalSll[best])
            best = sigma;
    }
    res.sigmaOpt = best;

    if (settings.fullMetrics) {
        for (int sigma = 0; sigma < total; ++sigma) {
            const auto grid = to_excitations(ds, sigma / Q, sigma % Q);
            res.rows[sigma].dDb =
                directivity(grid, cell, element, steer, settings.quadrature);
            res.rows[sigma].bwDeg = max_hpbw(grid, cell, element, steer, settings.phiSteps);
        }
    }
    return res;
}

SynthesisResult synthesize(const SynthesisSpec& spec, const std::vector<CatalogEntry>& catalog)
{
    std::vector<std::string> trace;
    if (catalog.empty())
        throw Infeasible("synthesize: empty catalog");

    const auto candidates = step1_select(catalog, spec.sllT, 1.0);
    if (candidates.empty()) {
        throw Infeasible("synthesize: step 1 found no descriptors with SLL_SUP <= " +
                         std::to_string(spec.sllT) + " dB");
    }

    for (const auto& cand : candidates) {
        const auto& entry = catalog[cand.catalogIndex];
        const auto& ds = entry.ds;

        std::vector<LatticeChoice> lattices;
        try {
            lattices = step2_lattices(ds, spec.target, spec.element, spec.mnMax, spec.box,
                                      spec.steer);
        } catch (const Error& e) {
            trace.push_back(entry.name + ": " + e.what());
            continue;
        }

        const int tries = std::min<std::size_t>(lattices.size(), spec.maxLatticeTries);
        for (int li = 0; li < tries; ++li) {
            const auto& lat = lattices[li];
            std::ostringstream tag;
            tag << entry.name << " cell(" << lat.cell.d1x << "," << lat.cell.d1y << ","
                << lat.cell.d2x << "," << lat.cell.d2y << ") mn(" << lat.m << "," << lat.n
                << ")";

            ThetaBar tb{0.0, ThetaBar::Provenance::DefaultRule};
            try {
                switch (spec.thetaBar.mode) {
                case ThetaBarSpec::Mode::DefaultRule:
                    tb = theta_bar_default(ds.P, ds.Q, lat.cell);
                    break;
                case ThetaBarSpec::Mode::Fixed:
                    tb = theta_bar_user(spec.thetaBar.value);
                    break;
                case ThetaBarSpec::Mode::CalibrateDInf:
                    tb = theta_bar_calibrated(ds.P, ds.Q, ds.H, ds.gamma, spec.thetaBar.value);
                    break;
                }
            } catch (const Error& e) {
                trace.push_back(tag.str() + ": theta_bar: " + e.what());
                continue;
            }

            const auto s3 = step3_check(ds, lat.cell, tb, spec.dT, spec.bwT);
            if (!s3.pass) {
                std::ostringstream os;
                os << tag.str() << ": step 3 fail (D_INF " << s3.dInfDb << " dB, BW_SUP "
                   << s3.bwSupDeg << " deg)";
                trace.push_back(os.str());
                continue;
            }

            double epsTrue;
            try {
                epsTrue = epsilon_factor(spec.element, lat.cell, ds.P, ds.Q, spec.steer);
            } catch (const Error& e) {
                trace.push_back(tag.str() + ": " + e.what());
                continue;
            }
            const auto sb = sll_bounds(ds.P, ds.Q, ds.H, ds.gamma, epsTrue);
            if (sb.sllSupDb > spec.sllT) {
                trace.push_back(tag.str() + ": SLL_SUP with measured epsilon exceeds target");
                continue;
            }

            SweepSettings sw;
            sw.oversampleScreen = spec.oversampleScreen;
            sw.oversampleFinal = spec.oversampleFinal;
            sw.mainlobe = spec.mainlobe;
            sw.fullMetrics = spec.sweepFullMetrics;
            sw.quadrature = spec.quadrature;
            sw.phiSteps = spec.phiSteps;
            const auto sweep = step4_shift_sweep(ds, lat.cell, spec.element, spec.steer, sw);

            const int sx = sweep.sigmaOpt / ds.Q, sy = sweep.sigmaOpt % ds.Q;
            const auto layout = to_excitations(ds, sx, sy);
            MeasureSettings ms;
            ms.oversample = spec.oversampleFinal;
            ms.mainlobe = spec.mainlobe;
            ms.quadrature = spec.quadrature;
            ms.phiSteps = spec.phiSteps;
            const auto measured = measure_all(layout, lat.cell, spec.element, spec.steer, ms,
                                              {{spec.target.uT, spec.target.vT}});

            SynthesisResult r;
            r.constraints = {
                {"sll_db", spec.sllT, measured.sllDb, measured.sllDb <= spec.sllT},
                {"d_db", spec.dT, measured.dDb, measured.dDb >= spec.dT},
                {"bw_deg", spec.bwT, measured.bwDeg, measured.bwDeg <= spec.bwT},
                {"pattern_at_target_db", spec.target.pDb, measured.patternAt[0].db,
                 measured.patternAt[0].db <= spec.target.pDb},
            };
            const bool allMet =
                std::all_of(r.constraints.begin(), r.constraints.end(),
                            [](const ConstraintCheck& c) { return c.met; });
            if (!allMet) {
                std::ostringstream os;
                os << tag.str() << ": measured constraints fail (SLL " << measured.sllDb
                   << ", D " << measured.dDb << ", BW " << measured.bwDeg << ", P(target) "
                   << measured.patternAt[0].db << ")";
                trace.push_back(os.str());
                continue;
            }

            r.success = true;
            r.dsName = entry.name;
            r.ds = ds;
            r.cell = lat.cell;
            r.m = lat.m;
            r.n = lat.n;
            r.sigmaOpt = sweep.sigmaOpt;
            r.sigmaX = sx;
            r.sigmaY = sy;
            r.bounds = bounds_report(ds.P, ds.Q, ds.H, ds.gamma, spec.element, lat.cell,
                                     spec.steer, tb);
            r.measured = measured;
            r.perShift = sweep.rows;
            r.diagnostics = trace;
            return r;
        }
        trace.push_back(entry.name + ": all lattice candidates exhausted");
    }

    std::ostringstream os;
    os << "synthesize: infeasible after " << trace.size() << " attempts";
    for (const auto& t : trace)
        os << "\n  " << t;
    throw Infeasible(os.str());
}

} // namespace dsthin
