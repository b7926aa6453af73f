#include "dsthin/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "dsthin/errors.hpp"
#include "dsthin/parallel.hpp"
#include "dsthin/pattern.hpp"

namespace dsthin {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDbFloor = -200.0;

using json = nlohmann::ordered_json;

std::string fmt_e(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

std::string fmt_db(double db)
{
    if (!std::isfinite(db) || db < kDbFloor)
        return "-inf";
    return fmt_e(db);
}

double to_db_norm(double value, double peak)
{
    if (value <= 0.0 || peak <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(value / peak);
}

std::ofstream open_out(const std::string& dir, const std::string& name)
{
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

ElementPattern element_from_name(const std::string& name)
{
    if (name == "isotropic")
        return ElementPattern::isotropic();
    if (name == "cosine")
        return ElementPattern::cosine_y();
    throw ConfigError("unknown element pattern '" + name + "' (use isotropic or cosine)");
}

CatalogEntry parse_ds_spec(const std::string& spec)
{
    const auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    try {
        if (kind == "twin-prime") {
            if (parts.size() < 2)
                throw ConfigError("twin-prime spec needs P,Q");
            const auto pq = split(parts[1], ',');
            if (pq.size() != 2)
                throw ConfigError("twin-prime spec needs P,Q");
            return CatalogEntry{spec, twin_prime(std::stoi(pq[0]), std::stoi(pq[1]))};
        }
        if (kind == "singer") {
            if (parts.size() < 2)
                throw ConfigError("singer spec needs m");
            const int m = std::stoi(parts[1]);
            const auto cyc = singer_lfsr(m);
            for (std::size_t i = 2; i < parts.size(); ++i) {
                if (parts[i].rfind("fold=", 0) == 0) {
                    const auto dims = split(parts[i].substr(5), 'x');
                    if (dims.size() != 2)
                        throw ConfigError("fold spec needs PxQ");
                    return CatalogEntry{spec,
                                        crt_fold(cyc, std::stoi(dims[0]), std::stoi(dims[1]))};
                }
            }
            return CatalogEntry{spec, as_grid(cyc)};
        }
        if (kind == "file") {
            if (parts.size() < 2)
                throw ConfigError("file spec needs a path");
            std::string path = parts[1];
            for (std::size_t i = 2; i < parts.size(); ++i)
                path += ":" + parts[i];
            return CatalogEntry{spec, load_ds(path)};
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("malformed DS spec '" + spec + "'");
    }
    throw ConfigError("unknown DS spec '" + spec + "'");
}

ExcitationGrid build_source_grid(const RunConfig& cfg)
{
    const auto& src = cfg.source;
    if (src.allOnes) {
        if (src.gridP <= 0 || src.gridQ <= 0)
            throw ConfigError("all-ones source needs grid dimensions");
        return ExcitationGrid::all_ones(src.gridP, src.gridQ);
    }
    if (src.randomTau) {
        if (src.gridP <= 0 || src.gridQ <= 0)
            throw ConfigError("random source needs grid dimensions");
        return random_thinned(src.gridP, src.gridQ, *src.randomTau, cfg.seed);
    }
    if (!src.ds.empty()) {
        const auto entry = parse_ds_spec(src.ds);
        return to_excitations(entry.ds, src.shiftX, src.shiftY);
    }
    throw ConfigError("no excitation source configured");
}

void apply_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    try {
        if (j.contains("command"))
            cfg.command = j["command"].get<std::string>();
        if (j.contains("output_dir"))
            cfg.outputDir = j["output_dir"].get<std::string>();
        if (j.contains("seed"))
            cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("workers"))
            cfg.workersCount = j["workers"].get<int>();
        if (j.contains("steer")) {
            cfg.steer.u0 = j["steer"].value("u0", 0.0);
            cfg.steer.v0 = j["steer"].value("v0", 0.0);
        }
        if (j.contains("element"))
            cfg.element = j["element"].get<std::string>();
        if (j.contains("cell")) {
            cfg.d1x = j["cell"].value("d1x", cfg.d1x);
            cfg.d1y = j["cell"].value("d1y", cfg.d1y);
            cfg.d2x = j["cell"].value("d2x", cfg.d2x);
            cfg.d2y = j["cell"].value("d2y", cfg.d2y);
        }
        if (j.contains("oversample"))
            cfg.oversample = j["oversample"].get<int>();
        if (j.contains("mainlobe_radius"))
            cfg.mainlobeRadius = j["mainlobe_radius"].get<double>();
        if (j.contains("quadrature")) {
            cfg.quadrature.nTheta = j["quadrature"].value("n_theta", cfg.quadrature.nTheta);
            cfg.quadrature.nPhi = j["quadrature"].value("n_phi", cfg.quadrature.nPhi);
        }
        if (j.contains("phi_steps"))
            cfg.phiSteps = j["phi_steps"].get<int>();
        if (j.contains("gl_max_order"))
            cfg.glMaxOrder = j["gl_max_order"].get<int>();

        if (j.contains("source")) {
            const auto& s = j["source"];
            if (s.contains("ds"))
                cfg.source.ds = s["ds"].get<std::string>();
            if (s.contains("shift")) {
                cfg.source.shiftX = s["shift"][0].get<int>();
                cfg.source.shiftY = s["shift"][1].get<int>();
            }
            if (s.contains("random")) {
                cfg.source.randomTau = s["random"].value("tau", 0.5);
                cfg.source.gridP = s["random"].value("p", 0);
                cfg.source.gridQ = s["random"].value("q", 0);
            }
            if (s.contains("all_ones")) {
                cfg.source.allOnes = true;
                cfg.source.gridP = s["all_ones"].value("p", 0);
                cfg.source.gridQ = s["all_ones"].value("q", 0);
            }
        }
        if (j.contains("sweep")) {
            const auto& s = j["sweep"];
            cfg.sweepFullMetrics = s.value("full_metrics", cfg.sweepFullMetrics);
            cfg.oversampleScreen = s.value("oversample_screen", cfg.oversampleScreen);
            cfg.oversampleFinal = s.value("oversample_final", cfg.oversampleFinal);
        }
        if (j.contains("synthesis")) {
            const auto& s = j["synthesis"];
            cfg.sllT = s.value("sll_t", cfg.sllT);
            cfg.dT = s.value("d_t", cfg.dT);
            cfg.bwT = s.value("bw_t", cfg.bwT);
            if (s.contains("pattern_target")) {
                cfg.target.uT = s["pattern_target"].value("u", 0.0);
                cfg.target.vT = s["pattern_target"].value("v", 0.0);
                cfg.target.pDb = s["pattern_target"].value("p_db", 0.0);
            }
            if (s.contains("catalog"))
                cfg.catalog = s["catalog"].get<std::vector<std::string>>();
            if (s.contains("cell_box")) {
                const auto& b = s["cell_box"];
                auto range = [&](const char* key, double& lo, double& hi) {
                    if (b.contains(key)) {
                        lo = b[key][0].get<double>();
                        hi = b[key][1].get<double>();
                    }
                };
                range("d1x", cfg.box.d1xMin, cfg.box.d1xMax);
                range("d1y", cfg.box.d1yMin, cfg.box.d1yMax);
                range("d2x", cfg.box.d2xMin, cfg.box.d2xMax);
                range("d2y", cfg.box.d2yMin, cfg.box.d2yMax);
                cfg.box.scanSteps = b.value("scan_steps", cfg.box.scanSteps);
                cfg.box.nuMin = b.value("nu_min", cfg.box.nuMin);
            }
            cfg.mnMax = s.value("mn_max", cfg.mnMax);
            if (s.contains("theta_bar")) {
                const std::string mode = s["theta_bar"].value("mode", "default");
                if (mode == "default")
                    cfg.thetaBar.mode = ThetaBarSpec::Mode::DefaultRule;
                else if (mode == "fixed")
                    cfg.thetaBar.mode = ThetaBarSpec::Mode::Fixed;
                else if (mode == "calibrate_d_inf")
                    cfg.thetaBar.mode = ThetaBarSpec::Mode::CalibrateDInf;
                else
                    throw ConfigError("unknown theta_bar mode '" + mode + "'");
                cfg.thetaBar.value = s["theta_bar"].value("value", 0.0);
            }
            cfg.maxLatticeTries = s.value("max_lattice_tries", cfg.maxLatticeTries);
            cfg.synthSweepFullMetrics = s.value("sweep_full_metrics", cfg.synthSweepFullMetrics);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
}

namespace {

void write_pattern_csv(std::ofstream& out, const PatternGrid& pg)
{
    out << "u,v,chi,psi,p_linear,p_db_norm,visible\n";
    const int rows = pg.rows(), cols = pg.cols();
    for (int k = 0; k < rows; ++k) {
        for (int l = 0; l < cols; ++l) {
            const auto id = pg.node(k, l);
            const auto& d = pg.dir[id];
            const double chi = 2.0 * kPi * k / rows;
            const double psi = 2.0 * kPi * l / cols;
            const double value = d.visible ? pg.value[id] : pg.af[id];
            out << fmt_e(d.u) << ',' << fmt_e(d.v) << ',' << fmt_e(chi) << ',' << fmt_e(psi)
                << ',' << fmt_e(value) << ',' << fmt_db(to_db_norm(value, pg.peakValue)) << ','
                << (d.visible ? 1 : 0) << '\n';
        }
    }
}

UnitCell cell_from_config(const RunConfig& cfg)
{
    return make_unit_cell(cfg.d1x, cfg.d1y, cfg.d2x, cfg.d2y);
}

} // namespace

int cmd_predict(const RunConfig& cfg)
{
    const auto cell = cell_from_config(cfg);
    const auto element = element_from_name(cfg.element);
    const auto grid = build_source_grid(cfg);

    // sample prediction goes through the autocorrelation, never the weights
    const auto acf = autocorrelation(grid);
    const auto samples = predict_samples(acf, element, cell, cfg.steer);
    double peakSample = 0.0;
    for (const auto& s : samples)
        peakSample = std::max(peakSample, s.value);

    auto sOut = open_out(cfg.outputDir, "samples.csv");
    sOut << "k,l,u,v,p_linear,p_db_norm\n";
    for (const auto& s : samples) {
        sOut << s.k << ',' << s.l << ',' << fmt_e(s.dir.u) << ',' << fmt_e(s.dir.v) << ','
             << fmt_e(s.value) << ',' << fmt_db(to_db_norm(s.value, peakSample)) << '\n';
    }

    const auto pg = pattern_grid_fft(grid, cell, element, cfg.oversample, cfg.steer);
    auto pOut = open_out(cfg.outputDir, "pattern.csv");
    write_pattern_csv(pOut, pg);

    auto gOut = open_out(cfg.outputDir, "glmap.csv");
    gOut << "b,c,u,v,visible\n";
    for (const auto& gl : grating_lobes(cell, cfg.steer, cfg.glMaxOrder)) {
        gOut << gl.b << ',' << gl.c << ',' << fmt_e(gl.dir.u) << ',' << fmt_e(gl.dir.v) << ','
             << (gl.dir.visible ? "true" : "false") << '\n';
    }
    return 0;
}

namespace {

void write_sweep_csv(std::ofstream& out, const std::vector<ShiftRow>& rows,
                     const BoundsReport& bounds)
{
    out << "sigma,sigma_x,sigma_y,sll_db,d_db,bw_deg\n";
    for (const auto& r : rows) {
        out << r.sigma << ',' << r.sx << ',' << r.sy << ',' << fmt_db(r.sllDb) << ',';
        if (r.dDb)
            out << fmt_db(*r.dDb);
        out << ',';
        if (r.bwDeg)
            out << fmt_e(*r.bwDeg);
        out << '\n';
    }
    out << "# bounds sll_inf_db=" << fmt_db(bounds.sllInfDb)
        << " sll_sup_db=" << fmt_db(bounds.sllSupDb) << " d_inf_db=" << fmt_db(bounds.dInfDb)
        << " bw_sup_deg=" << fmt_e(bounds.bwSupDeg) << '\n';
}

ThetaBar resolve_theta_bar(const ThetaBarSpec& tbs, const DifferenceSet& ds,
                           const UnitCell& cell)
{
    switch (tbs.mode) {
    case ThetaBarSpec::Mode::Fixed:
        return theta_bar_user(tbs.value);
    case ThetaBarSpec::Mode::CalibrateDInf:
        return theta_bar_calibrated(ds.P, ds.Q, ds.H, ds.gamma, tbs.value);
    case ThetaBarSpec::Mode::DefaultRule:
    default:
        return theta_bar_default(ds.P, ds.Q, cell);
    }
}

} // namespace

int cmd_sweep(const RunConfig& cfg)
{
    if (cfg.source.ds.empty())
        throw ConfigError("sweep needs a difference-set source");
    const auto cell = cell_from_config(cfg);
    const auto element = element_from_name(cfg.element);
    const auto entry = parse_ds_spec(cfg.source.ds);

    SweepSettings sw;
    sw.oversampleScreen = cfg.oversampleScreen;
    sw.oversampleFinal = cfg.oversampleFinal;
    sw.mainlobe.cellRadius = cfg.mainlobeRadius;
    sw.fullMetrics = cfg.sweepFullMetrics;
    sw.quadrature = cfg.quadrature;
    sw.phiSteps = cfg.phiSteps;
    const auto sweep = step4_shift_sweep(entry.ds, cell, element, cfg.steer, sw);

    const auto tb = resolve_theta_bar(cfg.thetaBar, entry.ds, cell);
    const auto bounds =
        bounds_report(entry.ds.P, entry.ds.Q, entry.ds.H, entry.ds.gamma, element, cell,
                      cfg.steer, tb);

    auto out = open_out(cfg.outputDir, "sweep.csv");
    write_sweep_csv(out, sweep.rows, bounds);
    return 0;
}

namespace {

json constraints_json(const std::vector<ConstraintCheck>& checks)
{
    json arr = json::array();
    for (const auto& c : checks) {
        json e;
        e["name"] = c.name;
        e["target"] = c.target;
        e["value"] = c.value;
        e["met"] = c.met;
        arr.push_back(e);
    }
    return arr;
}

json cell_json(const UnitCell& cell)
{
    json c;
    c["d1x"] = cell.d1x;
    c["d1y"] = cell.d1y;
    c["d2x"] = cell.d2x;
    c["d2y"] = cell.d2y;
    c["nu"] = cell.nu;
    return c;
}

} // namespace

int cmd_synthesize(const RunConfig& cfg)
{
    if (cfg.catalog.empty())
        throw ConfigError("synthesize needs a non-empty catalog");

    SynthesisSpec spec;
    spec.sllT = cfg.sllT;
    spec.dT = cfg.dT;
    spec.bwT = cfg.bwT;
    spec.target = cfg.target;
    spec.steer = cfg.steer;
    spec.element = element_from_name(cfg.element);
    spec.box = cfg.box;
    spec.mnMax = cfg.mnMax;
    spec.thetaBar = cfg.thetaBar;
    spec.oversampleScreen = cfg.oversampleScreen;
    spec.oversampleFinal = cfg.oversampleFinal;
    spec.mainlobe.cellRadius = cfg.mainlobeRadius;
    spec.quadrature = cfg.quadrature;
    spec.phiSteps = cfg.phiSteps;
    spec.maxLatticeTries = cfg.maxLatticeTries;
    spec.sweepFullMetrics = cfg.synthSweepFullMetrics;

    std::vector<CatalogEntry> catalog;
    for (const auto& s : cfg.catalog)
        catalog.push_back(parse_ds_spec(s));

    json root;
    root["schema_version"] = "1";
    json req;
    req["sll_t_db"] = spec.sllT;
    req["d_t_db"] = spec.dT;
    req["bw_t_deg"] = spec.bwT;
    req["pattern_target"] = {{"u", spec.target.uT}, {"v", spec.target.vT},
                             {"p_db", spec.target.pDb}};
    root["request"] = req;

    SynthesisResult result;
    try {
        result = synthesize(spec, catalog);
    } catch (const Infeasible& e) {
        root["status"] = "infeasible";
        root["diagnostics"] = json::array();
        for (const auto& line : split(e.what(), '\n'))
            root["diagnostics"].push_back(line);
        auto out = open_out(cfg.outputDir, "result.json");
        out << root.dump(2) << '\n';
        return 2;
    }

    root["status"] = "success";
    root["ds"] = {{"name", result.dsName}, {"P", result.ds.P}, {"Q", result.ds.Q},
                  {"H", result.ds.H}, {"gamma", result.ds.gamma}};
    root["cell"] = cell_json(result.cell);
    root["m"] = result.m;
    root["n"] = result.n;
    root["sigma_opt"] = {{"sigma", result.sigmaOpt}, {"sigma_x", result.sigmaX},
                         {"sigma_y", result.sigmaY}};
    json bounds;
    bounds["sll_inf_db"] = result.bounds.sllInfDb;
    bounds["sll_sup_db"] = result.bounds.sllSupDb;
    bounds["d_inf_db"] = result.bounds.dInfDb;
    bounds["bw_sup_deg"] = result.bounds.bwSupDeg;
    bounds["epsilon"] = result.bounds.epsilon;
    bounds["mc_rhs"] = result.bounds.mcRhs;
    bounds["theta_bar_rad"] = result.bounds.thetaBarRad;
    bounds["peak_level"] = result.bounds.peakLevel;
    bounds["offpeak_level"] = result.bounds.offpeakLevel;
    root["bounds"] = bounds;
    json measured;
    measured["sll_db"] = result.measured.sllDb;
    measured["d_db"] = result.measured.dDb;
    measured["bw_deg"] = result.measured.bwDeg;
    measured["pattern_at_target_db"] = result.measured.patternAt[0].db;
    root["measured"] = measured;
    root["constraints"] = constraints_json(result.constraints);
    root["diagnostics"] = result.diagnostics;

    auto out = open_out(cfg.outputDir, "result.json");
    out << root.dump(2) << '\n';

    // optimal layout as a DS file
    const auto layoutGrid = to_excitations(result.ds, result.sigmaX, result.sigmaY);
    std::vector<std::pair<int, int>> idx = layoutGrid.active_cells();
    const auto layout = make_difference_set(result.ds.P, result.ds.Q, std::move(idx));
    save_ds(layout, (std::filesystem::path(cfg.outputDir) / "layout.ds").string());

    const auto tbForBounds = theta_bar_user(result.bounds.thetaBarRad);
    auto sOut = open_out(cfg.outputDir, "sweep.csv");
    write_sweep_csv(sOut, result.perShift, result.bounds);
    (void)tbForBounds;

    const auto pg = pattern_grid_fft(layoutGrid, result.cell, spec.element,
                                     cfg.oversampleFinal, cfg.steer);
    auto pOut = open_out(cfg.outputDir, "pattern.csv");
    write_pattern_csv(pOut, pg);
    return 0;
}

int cmd_ds_make(const RunConfig& cfg, const std::string& outFile)
{
    if (cfg.source.ds.empty())
        throw ConfigError("ds-make needs --ds");
    const auto entry = parse_ds_spec(cfg.source.ds);
    const auto grid = to_excitations(entry.ds, cfg.source.shiftX, cfg.source.shiftY);
    auto ds = make_difference_set(entry.ds.P, entry.ds.Q, grid.active_cells());
    save_ds(ds, outFile);
    std::cout << "wrote (" << ds.P << "x" << ds.Q << ", " << ds.H << ", " << ds.gamma
              << ") set to " << outFile << "\n";
    return 0;
}

int cmd_ds_validate(const std::string& file)
{
    const auto ds = load_ds(file);
    std::cout << file << ": valid (" << ds.P << "x" << ds.Q << ", " << ds.H << ", " << ds.gamma
              << ") difference set\n";
    return 0;
}

int run_command(const RunConfig& cfg, const std::string& dsMakeOut,
                const std::string& dsValidateFile)
{
    try {
        if (cfg.workersCount > 0)
            set_workers(cfg.workersCount);
        else
            workers();
        if (cfg.command == "predict")
            return cmd_predict(cfg);
        if (cfg.command == "sweep")
            return cmd_sweep(cfg);
        if (cfg.command == "synthesize")
            return cmd_synthesize(cfg);
        if (cfg.command == "ds-make")
            return cmd_ds_make(cfg, dsMakeOut);
        if (cfg.command == "ds-validate")
            return cmd_ds_validate(dsValidateFile);
        std::cerr << "error: unknown command '" << cfg.command << "'\n";
        return 1;
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidDescriptors& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const NotADifferenceSet& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace dsthin
