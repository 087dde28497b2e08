// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities.

#include <catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>

#include "neei/oracle.hpp"
#include "neei/runner.hpp"

using namespace neei;

#ifndef NEEI_SCENARIO_DIR
#define NEEI_SCENARIO_DIR "scenarios"
#endif

namespace {

const std::string kDir = NEEI_SCENARIO_DIR;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, bool pass, const std::string& detail, double elapsed_s, double limit_s) {
    std::printf("[%s] criterion %d: %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str(), elapsed_s, limit_s);
    std::fflush(stdout);
}

// fig4 traces shared by criteria 3 and 4
struct Fig4Results {
    std::map<std::pair<std::string, std::uint64_t>, EpisodeTrace> traces;
    double elapsed_s = 0.0;
};

const Fig4Results& fig4_results() {
    static Fig4Results results = [] {
        Timer timer;
        const Scenario sc = parse_scenario(kDir + "/fig4_rep.json");
        const RepEpisodeSetup setup = make_rep_setup(sc);
        Fig4Results out;
        std::mutex mtx;
        std::vector<std::function<void()>> jobs;
        for (const RepVariant variant :
             {RepVariant::rep, RepVariant::nfc, RepVariant::ffc, RepVariant::nfc_planar})
            for (const std::uint64_t seed : sc.seeds)
                jobs.emplace_back([&, variant, seed] {
                    EpisodeTrace trace = run_episode(setup, variant, seed);
                    std::lock_guard<std::mutex> lk(mtx);
                    out.traces[{variant_name(variant), seed}] = std::move(trace);
                });
        run_jobs(std::move(jobs));
        out.elapsed_s = timer.seconds();
        return out;
    }();
    return results;
}

} // namespace

TEST_CASE("criterion 1: rayleigh distances", "[c1]") {
    Timer timer;
    const ArrayGeometry nfc{640, 30e9, 0.0, {0, 0}, {0, 1}};
    const ArrayGeometry ffc{32, 1.5e9, 0.0, {0, 0}, {0, 1}};
    const double r_nfc = rayleigh_distance(nfc);
    const double r_ffc = rayleigh_distance(ffc);
    const bool ok = std::fabs(r_nfc - 2041.0) / 2041.0 < 0.01 && std::fabs(r_ffc - 96.2) / 96.2 < 0.01;
    const double elapsed = timer.seconds();
    report(1, ok && elapsed < 1.0,
           "rayleigh 640@30GHz = " + std::to_string(r_nfc) + " m, 32@1.5GHz = " + std::to_string(r_ffc) + " m",
           elapsed, 1);
    CHECK(ok);
    CHECK(elapsed < 1.0);
}

TEST_CASE("criterion 2: focusing versus steering", "[c2]") {
    Timer timer;
    const ArrayGeometry geom{640, 30e9, 0.0, {0, 0}, {0, 1}};
    const PathlossModel unit_pl{1.0, 0.0}; // unit pathloss isolates the array factor
    const Vec2 focal{5.0, 0.0};

    const ChannelVector truth = los_channel_near(geom, focal, unit_pl);
    const double g_near = beam_gain(truth, mrt_beam(truth));
    const double g_planar = beam_gain(truth, mrt_beam(los_channel_far(geom, focal, unit_pl)));
    const double margin_db = db_from_linear(g_near / g_planar);
    const bool gain_ok = margin_db >= 3.0;

    const Rect region{1.0, -5.0, 21.0, 5.0};
    const double res = 0.2;
    const Heatmap near_map = gain_heatmap(geom, mrt_beam(truth), region, res, unit_pl);
    const Heatmap far_map =
        gain_heatmap(geom, mrt_beam(los_channel_far(geom, focal, unit_pl)), region, res, unit_pl);

    const auto mask_touches = [](const Heatmap& hm) {
        double peak = -1e300;
        for (double v : hm.values_db)
            peak = std::max(peak, v);
        bool x_far = false, x_near = false, y_lo = false, y_hi = false;
        for (int iy = 0; iy < hm.ny; ++iy)
            for (int ix = 0; ix < hm.nx; ++ix)
                if (hm.at(ix, iy) >= peak - 3.0) {
                    x_far |= ix == hm.nx - 1;
                    x_near |= ix == 0;
                    y_lo |= iy == 0;
                    y_hi |= iy == hm.ny - 1;
                }
        return std::array<bool, 4>{x_near, x_far, y_lo, y_hi};
    };
    const auto near_touch = mask_touches(near_map);
    const auto far_touch = mask_touches(far_map);
    const bool near_bounded = !near_touch[0] && !near_touch[1] && !near_touch[2] && !near_touch[3];
    const bool far_unbounded_in_distance = far_touch[1];

    const double elapsed = timer.seconds();
    const bool ok = gain_ok && near_bounded && far_unbounded_in_distance;
    report(2, ok && elapsed < 10.0,
           "gain margin " + std::to_string(margin_db) + " dB; near -3dB region bounded = " +
               (near_bounded ? "yes" : "no") + ", far region reaches distance edge = " +
               (far_unbounded_in_distance ? "yes" : "no"),
           elapsed, 10);
    CHECK(gain_ok);
    CHECK(near_bounded);
    CHECK(far_unbounded_in_distance);
    CHECK(elapsed < 10.0);
}

TEST_CASE("criterion 3: REP rate ordering on fig4", "[c3]") {
    const auto& results = fig4_results();
    const Scenario sc = parse_scenario(kDir + "/fig4_rep.json");

    int ordered = 0;
    double min_clear = std::numeric_limits<double>::infinity();
    for (const std::uint64_t seed : sc.seeds) {
        const double rep = results.traces.at({"REP", seed}).mean_rate_bps;
        const double nfc = results.traces.at({"NFC", seed}).mean_rate_bps;
        const double ffc = results.traces.at({"FFC", seed}).mean_rate_bps;
        const double planar = results.traces.at({"NFC-Planar", seed}).mean_rate_bps;
        if (rep > nfc && nfc > ffc && ffc > planar)
            ++ordered;
        for (const char* v : {"REP", "NFC", "FFC", "NFC-Planar"})
            min_clear = std::min(min_clear, results.traces.at({v, seed}).min_clearance_m);
    }
    const bool order_ok = ordered >= 18;
    const bool safe_ok = min_clear >= 0.1 - 1e-6;
    const bool ok = order_ok && safe_ok;
    report(3, ok && results.elapsed_s < 120.0,
           "REP>NFC>FFC>NFC-Planar on " + std::to_string(ordered) + "/20 seeds; min clearance " +
               std::to_string(min_clear) + " m",
           results.elapsed_s, 120);
    CHECK(order_ok);
    CHECK(safe_ok);
    CHECK(results.elapsed_s < 120.0);
}

TEST_CASE("criterion 4: REP approaches the edge array", "[c4]") {
    const auto& results = fig4_results();
    const Scenario sc = parse_scenario(kDir + "/fig4_rep.json");
    int closer = 0;
    double worst_gap = std::numeric_limits<double>::infinity();
    for (const std::uint64_t seed : sc.seeds) {
        const double rep = results.traces.at({"REP", seed}).min_array_distance_m;
        const double nfc = results.traces.at({"NFC", seed}).min_array_distance_m;
        if (rep < nfc)
            ++closer;
        worst_gap = std::min(worst_gap, nfc - rep);
    }
    const bool ok = closer == static_cast<int>(sc.seeds.size());
    report(4, ok,
           "REP passes closer on " + std::to_string(closer) + "/" + std::to_string(sc.seeds.size()) +
               " seeds (worst margin " + std::to_string(worst_gap) + " m)",
           0.0, 120);
    CHECK(ok);
}

TEST_CASE("criterion 5: VBF oracle equivalence and budget sweep", "[c5]") {
    Timer timer;
    Rng rng(20261);
    int good = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform01() * 9);
        const auto problem = synthetic_problem(random_vbf_instance(rng, n));
        const double e = solve_exact(problem).total_score;
        const double g = solve_greedy(problem).total_score;
        if (e <= 0.0 || g / e >= 0.95)
            ++good;
    }
    const bool greedy_ok = good == trials;

    const Scenario sc = parse_scenario(kDir + "/fig5_vbf.json");
    const auto frames = make_vbf_frames(sc);
    const LinkEnv env = make_env(sc.radio, sc.radio.nfc, BeamModel::near_field);
    int geq = 0, strict = 0;
    for (const double budget : sc.vbf.budget_sweep_w) {
        const double vbf =
            run_vbf_episode(frames, env, sc.vbf.mode(), budget, VbfVariant::vbf).total_score;
        const double thr =
            run_vbf_episode(frames, env, sc.vbf.mode(), budget, VbfVariant::nfc_throughput).total_score;
        if (vbf >= thr - 1e-12)
            ++geq;
        if (vbf > thr + 1e-9)
            ++strict;
    }
    const bool sweep_ok = geq == static_cast<int>(sc.vbf.budget_sweep_w.size()) && strict >= 8;
    const double elapsed = timer.seconds();
    const bool ok = greedy_ok && sweep_ok;
    report(5, ok && elapsed < 60.0,
           "greedy >= 95% of exact on " + std::to_string(good) + "/200 instances; sweep VBF>=throughput at " +
               std::to_string(geq) + "/10 points, strict at " + std::to_string(strict),
           elapsed, 60);
    CHECK(greedy_ok);
    CHECK(sweep_ok);
    CHECK(elapsed < 60.0);
}

TEST_CASE("criterion 6: minimum uplink power", "[c6]") {
    Timer timer;
    const Scenario sc = parse_scenario(kDir + "/fig5_vbf.json");
    const LinkEnv env = make_env(sc.radio, sc.radio.nfc, BeamModel::near_field);
    Frame f;
    f.position = {1.77, -0.30};
    f.payload_bits = 13840000.0;
    f.slot_duration_s = 1.0;
    const double g = realized_gain(env, f.position);
    const double expected = (std::exp2(1.384) - 1.0) * env.budget.noise_power_w / g;
    const double actual = min_power_w(f, env);
    const double rel = std::fabs(actual - expected) / expected;
    const double elapsed = timer.seconds();
    const bool ok = rel < 1e-9;
    report(6, ok && elapsed < 1.0,
           "p_min = " + std::to_string(actual * 1e6) + " uW, relative error " + std::to_string(rel), elapsed,
           1);
    CHECK(ok);
    CHECK(elapsed < 1.0);
}

TEST_CASE("criterion 7: OCN engagement pattern and energy ordering", "[c7]") {
    Timer timer;
    const Scenario sc = parse_scenario(kDir + "/fig6_ocn.json");
    const OcnSetup setup = make_ocn_setup(sc);

    std::map<std::pair<std::string, std::uint64_t>, FleetTrace> traces;
    std::mutex mtx;
    std::vector<std::function<void()>> jobs;
    for (const OcnVariant variant : {OcnVariant::ocn, OcnVariant::nfc_always, OcnVariant::ffc_always})
        for (const std::uint64_t seed : sc.seeds)
            jobs.emplace_back([&, variant, seed] {
                FleetTrace trace = run_ocn(setup, variant, seed);
                std::lock_guard<std::mutex> lk(mtx);
                traces[{variant_name(variant), seed}] = std::move(trace);
            });
    run_jobs(std::move(jobs));

    bool counts_ok = true, energy0_ok = true, late_ok = true, order_ok = true, live_ok = true, safe_ok = true;
    std::string first_counts;
    for (const std::uint64_t seed : sc.seeds) {
        const FleetTrace& ocn = traces.at({"OCN", seed});
        std::map<int, int> eng;
        std::map<int, double> energy;
        double r2_engage_t = -1.0;
        for (const auto& a : ocn.final_agents) {
            eng[a.id] = a.engagements;
            energy[a.id] = a.comm_energy_j;
            live_ok &= a.status == AgentStatus::done;
            safe_ok &= a.min_clearance_m >= setup.cfg.edge_planner.safety_distance - 1e-6;
        }
        for (const auto& ev : ocn.events)
            if (ev.robot_id == 2 && ev.reason == DecisionReason::engaged && r2_engage_t < 0.0)
                r2_engage_t = ev.t;
        if (seed == sc.seeds.front())
            first_counts = std::to_string(eng[1]) + "," + std::to_string(eng[2]) + "," +
                           std::to_string(eng[3]) + "," + std::to_string(eng[4]);
        counts_ok &= eng[1] == 1 && eng[2] == 1 && eng[3] == 2 && eng[4] == 0;
        energy0_ok &= energy[4] == 0.0;
        late_ok &= r2_engage_t > 15.0;
        const double e_ocn = ocn.fleet_energy_j;
        const double e_nfc = traces.at({"NFC-always", seed}).fleet_energy_j;
        const double e_ffc = traces.at({"FFC-always", seed}).fleet_energy_j;
        order_ok &= e_ocn < e_nfc && e_nfc < e_ffc;
        for (const char* v : {"NFC-always", "FFC-always"})
            for (const auto& a : traces.at({v, seed}).final_agents)
                live_ok &= a.status == AgentStatus::done;
    }
    const double elapsed = timer.seconds();
    const bool ok = counts_ok && energy0_ok && late_ok && order_ok && live_ok && safe_ok;
    report(7, ok && elapsed < 180.0,
           "counts (1,1,2,0): " + std::string(counts_ok ? "yes" : ("no, seed1 got " + first_counts)) +
               "; robot4 zero energy: " + (energy0_ok ? "yes" : "no") + "; robot2 engages after 15 s: " +
               (late_ok ? "yes" : "no") + "; energy OCN<NFC<FFC: " + (order_ok ? "yes" : "no") +
               "; all robots done: " + (live_ok ? "yes" : "no") + "; safe: " + (safe_ok ? "yes" : "no"),
           elapsed, 180);
    CHECK(counts_ok);
    CHECK(energy0_ok);
    CHECK(late_ok);
    CHECK(order_ok);
    CHECK(live_ok);
    CHECK(safe_ok);
    CHECK(elapsed < 180.0);
}

TEST_CASE("criterion 8: geometry oracle", "[c8]") {
    Timer timer;
    Rng rng(808);
    double max_dev = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const ConvexPolygon a = random_convex_polygon(rng);
        const ConvexPolygon b = random_convex_polygon(rng);
        max_dev = std::max(max_dev, std::fabs(min_distance(a, b) - sampled_min_distance(a, b, 10000)));
    }
    const double elapsed = timer.seconds();
    const bool ok = max_dev < 1e-3;
    report(8, ok && elapsed < 30.0, "max deviation " + std::to_string(max_dev) + " m over 100 pairs", elapsed,
           30);
    CHECK(ok);
    CHECK(elapsed < 30.0);
}

TEST_CASE("criterion 9: deterministic manifests", "[c9]") {
    Timer timer;
    Scenario sc = parse_scenario(kDir + "/fig4_rep.json");
    const auto tmp = std::filesystem::temp_directory_path() / "neei_acceptance_c9";
    std::filesystem::remove_all(tmp);
    RunOptions opt;
    opt.seed = sc.seeds.front();
    opt.variant = "NFC"; // the fastest fig4 variant
    const RunManifest a = run_scenario(sc, (tmp / "a").string(), opt);
    const RunManifest b = run_scenario(sc, (tmp / "b").string(), opt);
    const bool ok = a.scenario_hash == b.scenario_hash && a.file_checksums == b.file_checksums &&
                    !a.file_checksums.empty();
    std::filesystem::remove_all(tmp);
    const double elapsed = timer.seconds();
    report(9, ok, "rerun of seed " + std::to_string(*opt.seed) + " produced identical checksums for " +
                      std::to_string(a.file_checksums.size()) + " files",
           elapsed, 120);
    CHECK(ok);
}
