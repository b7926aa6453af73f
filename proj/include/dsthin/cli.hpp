#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsthin/synthesis.hpp"

namespace dsthin {

/// Excitation source for predict/sweep: a difference-set spec string
/// ("twin-prime:17,19", "singer:10", "singer:10:fold=31x33", "file:path"),
/// a random thinning, or a full grid.
struct SourceConfig {
    std::string ds;
    int shiftX = 0, shiftY = 0;
    std::optional<double> randomTau;
    int gridP = 0, gridQ = 0; ///< dimensions for random / all-ones sources
    bool allOnes = false;
};

struct RunConfig {
    std::string command;
    std::string outputDir = ".";
    std::uint64_t seed = 0;
    int workersCount = 0;

    Steering steer;
    std::string element = "isotropic";
    double d1x = 0.5, d1y = 0.0, d2x = 0.0, d2y = 0.5;
    int oversample = 16;
    double mainlobeRadius = 1.0;
    QuadratureSpec quadrature;
    int phiSteps = 360;
    int glMaxOrder = 3;

    SourceConfig source;

    bool sweepFullMetrics = true;
    int oversampleScreen = 8;
    int oversampleFinal = 16;

    // synthesis
    double sllT = 0.0, dT = 0.0, bwT = 0.0;
    PatternTarget target{0.0, 0.0, 0.0};
    std::vector<std::string> catalog;
    CellBox box;
    int mnMax = 0;
    ThetaBarSpec thetaBar;
    int maxLatticeTries = 24;
    bool synthSweepFullMetrics = false;
};

/// Populate a RunConfig from a JSON config document (missing keys keep their
/// defaults). Throws ConfigError on malformed input.
void apply_config_file(RunConfig& cfg, const std::string& path);

ElementPattern element_from_name(const std::string& name);

/// Materialize a DS spec string into a named difference set.
CatalogEntry parse_ds_spec(const std::string& spec);

/// Build the excitation grid a predict run operates on.
ExcitationGrid build_source_grid(const RunConfig& cfg);

/// predict: samples.csv, pattern.csv, glmap.csv
int cmd_predict(const RunConfig& cfg);

/// sweep: sweep.csv with a trailing bounds footer
int cmd_sweep(const RunConfig& cfg);

/// synthesize: result.json, layout.ds, sweep.csv, pattern.csv; exit code 2
/// and a diagnostic result.json when infeasible
int cmd_synthesize(const RunConfig& cfg);

/// ds-make / ds-validate utilities
int cmd_ds_make(const RunConfig& cfg, const std::string& outFile);
int cmd_ds_validate(const std::string& file);

/// Shared exit-code mapping: 0 ok, 1 config/input error, 2 infeasible,
/// 3 internal numeric failure.
int run_command(const RunConfig& cfg, const std::string& dsMakeOut = "",
                const std::string& dsValidateFile = "");

} // namespace dsthin
