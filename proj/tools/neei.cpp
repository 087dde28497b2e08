#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "neei/oracle.hpp"
#include "neei/runner.hpp"
#include "neei/scenario.hpp"

using namespace neei;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

Vec2 parse_pose_arg(const std::string& arg) {
    const auto comma = arg.find(',');
    if (comma == std::string::npos)
        throw ValidationError("--pose expects x,y");
    return {std::stod(arg.substr(0, comma)), std::stod(arg.substr(comma + 1))};
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir, std::int64_t seed,
            const std::string& variant) {
    const Scenario sc = parse_scenario(scenario_path);
    RunOptions opt;
    if (seed >= 0)
        opt.seed = static_cast<std::uint64_t>(seed);
    if (!variant.empty())
        opt.variant = variant;
    const RunManifest manifest = run_scenario(sc, out_dir, opt);
    std::cout << "scenario " << sc.name << " (" << manifest.scenario_hash << ") -> " << out_dir << "\n";
    for (const auto& [name, sum] : manifest.file_checksums)
        std::cout << "  " << sum << "  " << name << "\n";
    return kExitOk;
}

int cmd_heatmap(const std::string& scenario_path, const std::string& pose_arg, const std::string& out_file,
                const std::string& variant, double resolution) {
    const Scenario sc = parse_scenario(scenario_path);
    const Vec2 pose = parse_pose_arg(pose_arg);
    const bool use_ffc = variant == "ffc";
    if (use_ffc && !sc.radio.has_ffc)
        throw ValidationError("scenario has no ffc array");
    const ScenarioArray& arr = use_ffc ? sc.radio.ffc : sc.radio.nfc;
    const BeamModel model = (use_ffc || variant == "nfc-planar") ? BeamModel::planar : BeamModel::near_field;
    const LinkEnv env = make_env(sc.radio, arr, model);
    const ChannelVector ch = model == BeamModel::near_field ? los_channel_near(env.geom, pose, env.pathloss)
                                                            : los_channel_far(env.geom, pose, env.pathloss);
    const Heatmap hm = gain_heatmap(env.geom, mrt_beam(ch), sc.world.bounds, resolution, env.pathloss);
    write_file(out_file, heatmap_to_string(hm));
    std::cout << "wrote " << hm.nx << "x" << hm.ny << " heatmap to " << out_file << "\n";
    return kExitOk;
}

int cmd_oracle_geom(int pairs, int samples, std::uint64_t seed) {
    if (pairs > 100000)
        throw InstanceTooLarge("geometry oracle caps at 100000 pairs");
    Rng rng(seed);
    double max_dev = 0.0;
    std::printf("%6s %14s %14s %12s\n", "pair", "exact_m", "sampled_m", "deviation");
    for (int i = 0; i < pairs; ++i) {
        const ConvexPolygon a = random_convex_polygon(rng);
        const ConvexPolygon b = random_convex_polygon(rng);
        const double exact = min_distance(a, b);
        const double sampled = sampled_min_distance(a, b, samples);
        const double dev = std::fabs(exact - sampled);
        max_dev = std::max(max_dev, dev);
        if (pairs <= 50 || i % (pairs / 20 + 1) == 0)
            std::printf("%6d %14.9f %14.9f %12.3e\n", i, exact, sampled, dev);
    }
    std::printf("max deviation over %d pairs: %.3e (tolerance 1e-3)\n", pairs, max_dev);
    return max_dev < 1e-3 ? kExitOk : kExitError;
}

int cmd_oracle_vbf(int frames, int instances, std::uint64_t seed) {
    if (frames > 20)
        throw InstanceTooLarge("vbf oracle caps at 20 frames per instance");
    Rng rng(seed);
    int equal = 0;
    double worst = 1.0;
    std::printf("%6s %12s %12s %8s\n", "inst", "exact", "greedy", "ratio");
    for (int i = 0; i < instances; ++i) {
        const auto problem = synthetic_problem(random_vbf_instance(rng, frames));
        const double e = solve_exact(problem).total_score;
        const double g = solve_greedy(problem).total_score;
        const double ratio = e > 0.0 ? g / e : 1.0;
        worst = std::min(worst, ratio);
        if (std::fabs(e - g) <= 1e-9)
            ++equal;
        std::printf("%6d %12.6f %12.6f %8.4f\n", i, e, g, ratio);
    }
    std::printf("greedy == exact on %d/%d instances; worst ratio %.4f\n", equal, instances, worst);
    return kExitOk;
}

int cmd_oracle_rayleigh() {
    struct Row {
        const char* label;
        int n;
        double fc;
    };
    const Row rows[] = {{"NFC 640 @ 30 GHz", 640, 30e9}, {"FFC 32 @ 1.5 GHz", 32, 1.5e9}};
    std::printf("%-18s %6s %12s %12s %14s\n", "config", "N", "f_c_GHz", "aperture_m", "rayleigh_m");
    for (const Row& r : rows) {
        const ArrayGeometry g{r.n, r.fc, 0.0, {0.0, 0.0}, {0.0, 1.0}};
        std::printf("%-18s %6d %12.2f %12.4f %14.2f\n", r.label, r.n, r.fc / 1e9, g.aperture(),
                    rayleigh_distance(g));
    }
    return kExitOk;
}

int cmd_oracle_farfield() {
    const ArrayGeometry geom{640, 30e9, 0.0, {0.0, 0.0}, {0.0, 1.0}};
    const PathlossModel pl{1.0, 0.0};
    const double d = geom.aperture();
    std::printf("aperture %.4f m, rayleigh %.1f m\n", d, rayleigh_distance(geom));
    std::printf("%12s %20s\n", "distance_m", "max_phase_err_rad");
    for (const double mult : {0.5, 1.0, 3.0, 10.0, 100.0, 1000.0}) {
        const double dist = mult * d;
        std::printf("%12.2f %20.6f\n", dist, max_phase_error(geom, {dist, 0.0}, pl));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-field embodied edge intelligence simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, variant, pose_arg;
    std::int64_t seed_filter = -1;
    double resolution = 0.05;

    auto* run = app.add_subcommand("run", "run a scenario's experiment for every seed and variant");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_path, "output directory")->required();
    run->add_option("--seed", seed_filter, "run only this seed");
    run->add_option("--variant", variant, "run only this variant (e.g. REP, NFC, FFC, NFC-Planar)");

    auto* heatmap = app.add_subcommand("heatmap", "emit a beam-gain heatmap focused at a pose");
    heatmap->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    heatmap->add_option("--pose", pose_arg, "focal point as x,y in meters")->required();
    heatmap->add_option("--out", out_path, "output file")->required();
    heatmap->add_option("--variant", variant, "nfc (default), nfc-planar or ffc");
    heatmap->add_option("--resolution", resolution, "cell size in meters");

    auto* oracle = app.add_subcommand("oracle", "brute-force cross-checks");
    int pairs = 100, samples = 10000, frames = 10, instances = 50;
    std::uint64_t oracle_seed = 1;
    auto* geom = oracle->add_subcommand("geom", "polygon distance vs boundary sampling");
    geom->add_option("--pairs", pairs, "random polygon pairs");
    geom->add_option("--samples", samples, "boundary samples per polygon");
    geom->add_option("--seed", oracle_seed, "rng seed");
    auto* vbf = oracle->add_subcommand("vbf", "greedy vs exhaustive frame selection");
    vbf->add_option("--frames", frames, "frames per instance (<= 20)");
    vbf->add_option("--instances", instances, "random instances");
    vbf->add_option("--seed", oracle_seed, "rng seed");
    auto* rayleigh = oracle->add_subcommand("rayleigh", "near/far-field boundary table");
    auto* farfield = oracle->add_subcommand("farfield", "planar-approximation phase-error sweep");
    oracle->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(scenario_path, out_path, seed_filter, variant);
        if (heatmap->parsed())
            return cmd_heatmap(scenario_path, pose_arg, out_path, variant, resolution);
        if (geom->parsed())
            return cmd_oracle_geom(pairs, samples, oracle_seed);
        if (vbf->parsed())
            return cmd_oracle_vbf(frames, instances, oracle_seed);
        if (rayleigh->parsed())
            return cmd_oracle_rayleigh();
        if (farfield->parsed())
            return cmd_oracle_farfield();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InstanceTooLarge& e) {
        std::cerr << "instance too large: " << e.what() << "\n";
        return kExitValidation;
    } catch (const TooManyFramesForExact& e) {
        std::cerr << "instance too large: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NoFeasiblePlan& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
