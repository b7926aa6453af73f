#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsthin/cli.hpp"
#include "dsthin/errors.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::string ds;
    std::vector<int> shift;
    std::vector<double> d1, d2, steer;
    std::string element;
    int oversample = 0;
    long long seed = -1;
    int workers = 0;
};

void add_common(CLI::App* app, CommonOpts& o)
{
    app->add_option("--config", o.config, "JSON config file (flags override keys)");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--ds", o.ds, "difference-set source, e.g. twin-prime:11,13 or file:path");
    app->add_option("--shift", o.shift, "cyclic shift sx,sy")->delimiter(',')->expected(2);
    app->add_option("--d1", o.d1, "unit-cell axis d1x,d1y in wavelengths")
        ->delimiter(',')
        ->expected(2);
    app->add_option("--d2", o.d2, "unit-cell axis d2x,d2y in wavelengths")
        ->delimiter(',')
        ->expected(2);
    app->add_option("--steer", o.steer, "steering cosines u0,v0")->delimiter(',')->expected(2);
    app->add_option("--element", o.element, "element pattern: isotropic | cosine");
    app->add_option("--oversample", o.oversample, "pattern grid oversampling factor");
    app->add_option("--seed", o.seed, "RNG seed for all randomized paths");
    app->add_option("--workers", o.workers, "worker threads (or env DSTHIN_WORKERS)");
}

void merge_common(dsthin::RunConfig& cfg, const CommonOpts& o)
{
    if (!o.config.empty())
        dsthin::apply_config_file(cfg, o.config);
    if (!o.out.empty())
        cfg.outputDir = o.out;
    if (!o.ds.empty())
        cfg.source.ds = o.ds;
    if (o.shift.size() == 2) {
        cfg.source.shiftX = o.shift[0];
        cfg.source.shiftY = o.shift[1];
    }
    if (o.d1.size() == 2) {
        cfg.d1x = o.d1[0];
        cfg.d1y = o.d1[1];
    }
    if (o.d2.size() == 2) {
        cfg.d2x = o.d2[0];
        cfg.d2y = o.d2[1];
    }
    if (o.steer.size() == 2) {
        cfg.steer.u0 = o.steer[0];
        cfg.steer.v0 = o.steer[1];
    }
    if (!o.element.empty())
        cfg.element = o.element;
    if (o.oversample > 0)
        cfg.oversample = o.oversample;
    if (o.seed >= 0)
        cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (o.workers > 0)
        cfg.workersCount = o.workers;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dsthin: difference-set isophoric thinned array prediction and synthesis"};
    app.require_subcommand(1);

    CommonOpts predictOpts, sweepOpts, synthOpts, makeOpts;
    std::string randomSpec, allOnesSpec;
    int glOrder = 0;
    auto* predict = app.add_subcommand(
        "predict", "pattern samples, oversampled pattern grid, and grating-lobe map");
    add_common(predict, predictOpts);
    predict->add_option("--random", randomSpec, "random thinning source PxQ:tau");
    predict->add_option("--all-ones", allOnesSpec, "fully populated source PxQ");
    predict->add_option("--gl-order", glOrder, "grating-lobe map order");

    bool noFullMetrics = false;
    auto* sweep = app.add_subcommand("sweep", "SLL/D/BW over every cyclic shift");
    add_common(sweep, sweepOpts);
    sweep->add_flag("--sll-only", noFullMetrics, "skip per-shift directivity and beamwidth");

    auto* synth = app.add_subcommand("synthesize", "four-step analytic design pipeline");
    add_common(synth, synthOpts);

    std::string makeOut;
    auto* dsmake = app.add_subcommand("ds-make", "construct a difference set and save it");
    add_common(dsmake, makeOpts);
    dsmake->add_option("--ds-out", makeOut, "output DS file")->required();

    std::string validateFile;
    auto* dsvalidate = app.add_subcommand("ds-validate", "validate a DS file");
    dsvalidate->add_option("file", validateFile, "DS file to check")->required();

    CLI11_PARSE(app, argc, argv);

    dsthin::RunConfig cfg;
    try {
        if (predict->parsed()) {
            cfg.command = "predict";
            merge_common(cfg, predictOpts);
            if (!randomSpec.empty()) {
                const auto colon = randomSpec.find(':');
                const auto x = randomSpec.find('x');
                if (x == std::string::npos)
                    throw dsthin::ConfigError("--random needs PxQ:tau");
                cfg.source.gridP = std::stoi(randomSpec.substr(0, x));
                cfg.source.gridQ = std::stoi(randomSpec.substr(x + 1));
                cfg.source.randomTau =
                    colon == std::string::npos ? 0.5 : std::stod(randomSpec.substr(colon + 1));
            }
            if (!allOnesSpec.empty()) {
                const auto x = allOnesSpec.find('x');
                if (x == std::string::npos)
                    throw dsthin::ConfigError("--all-ones needs PxQ");
                cfg.source.allOnes = true;
                cfg.source.gridP = std::stoi(allOnesSpec.substr(0, x));
                cfg.source.gridQ = std::stoi(allOnesSpec.substr(x + 1));
            }
            if (glOrder > 0)
                cfg.glMaxOrder = glOrder;
        } else if (sweep->parsed()) {
            cfg.command = "sweep";
            merge_common(cfg, sweepOpts);
            if (noFullMetrics)
                cfg.sweepFullMetrics = false;
        } else if (synth->parsed()) {
            cfg.command = "synthesize";
            merge_common(cfg, synthOpts);
        } else if (dsmake->parsed()) {
            cfg.command = "ds-make";
            merge_common(cfg, makeOpts);
        } else if (dsvalidate->parsed()) {
            cfg.command = "ds-validate";
        }
    } catch (const dsthin::Error& e) {
        fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }

    return dsthin::run_command(cfg, makeOut, validateFile);
}
