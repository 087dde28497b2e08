#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "neei/io.hpp"
#include "neei/ocn.hpp"
#include "neei/rep.hpp"
#include "neei/scenario.hpp"
#include "neei/vbf.hpp"

namespace neei {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
    std::string scenario_hash;
    std::string tool_version = kToolVersion;
    std::vector<std::uint64_t> seeds;
    std::map<std::string, std::string> file_checksums; // filename -> fnv1a64 hex
};

inline json manifest_to_json(const RunManifest& m) {
    json j;
    j["schema_version"] = 1;
    j["scenario_hash"] = m.scenario_hash;
    j["tool_version"] = m.tool_version;
    j["seeds"] = m.seeds;
    j["files"] = json::object();
    for (const auto& [name, sum] : m.file_checksums)
        j["files"][name] = sum;
    return j;
}

inline int worker_count(std::size_t jobs) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NEEI_THREADS")) {
        const int forced = std::atoi(env);
        if (forced > 0)
            n = forced;
    }
    n = std::max(1, n);
    return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(1, jobs)));
}

inline void run_jobs(std::vector<std::function<void()>> jobs) {
    const int workers = worker_count(jobs.size());
    if (workers <= 1) {
        for (auto& job : jobs)
            job();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size())
                    return;
                try {
                    jobs[i]();
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Scenario -> runtime setups
// ---------------------------------------------------------------------------

inline LinkEnv make_env(const ScenarioRadio& radio, const ScenarioArray& arr, BeamModel model) {
    LinkEnv env{arr.geometry(), radio.pathloss(), radio.budget(), model};
    env.validate();
    return env;
}

inline RepEpisodeSetup make_rep_setup(const Scenario& sc) {
    if (sc.kind != TaskKind::rep)
        throw ValidationError("scenario task is not rep");
    if (!sc.radio.has_ffc)
        throw ValidationError("rep scenario needs radio.arrays.ffc for the FFC baseline");
    RepEpisodeSetup setup;
    setup.world = sc.world.build();
    setup.start.position = {sc.rep.start.x, sc.rep.start.y};
    setup.start.heading = wrap_angle(sc.rep.start.theta);
    setup.start.footprint = ConvexPolygon::axis_aligned_box({0, 0}, sc.rep.footprint_half_extent_m,
                                                            sc.rep.footprint_half_extent_m);
    setup.cfg = sc.rep.planner.rep_config();
    setup.cfg.goal = sc.rep.goal;
    setup.cfg.goal_tolerance = sc.rep.goal_tolerance_m;
    setup.cfg.radio_weight = sc.rep.radio_weight;
    setup.nfc_env = make_env(sc.radio, sc.radio.nfc, BeamModel::near_field);
    setup.ffc_env = make_env(sc.radio, sc.radio.ffc, BeamModel::planar);
    setup.time_limit_s = sc.time_limit_s;
    return setup;
}

inline std::vector<Frame> make_vbf_frames(const Scenario& sc) {
    if (sc.kind != TaskKind::vbf)
        throw ValidationError("scenario task is not vbf");
    const auto& v = sc.vbf;
    const auto captures = poses_along_path(v.capture_path, v.capture_count);
    const auto training = poses_along_path(v.training_path, v.training_count);
    std::vector<Frame> frames;
    frames.reserve(captures.size());
    for (std::size_t i = 0; i < captures.size(); ++i) {
        Frame f;
        f.id = static_cast<int>(i);
        f.position = captures[i].position;
        f.heading = captures[i].heading;
        f.payload_bits = v.payload_bits;
        f.slot_duration_s = v.slot_duration_s;
        f.score = frame_score_proxy(captures[i], training, v.score_length_scale_m, v.score_angle_scale_rad);
        frames.push_back(f);
    }
    return frames;
}

inline OcnSetup make_ocn_setup(const Scenario& sc) {
    if (sc.kind != TaskKind::ocn)
        throw ValidationError("scenario task is not ocn");
    if (!sc.radio.has_ffc)
        throw ValidationError("ocn scenario needs radio.arrays.ffc for the FFC-always baseline");
    const auto& c = sc.ocn;
    OcnSetup setup;
    setup.world = sc.world.build();
    setup.cfg.sinr_gate_db = c.sinr_gate_db;
    setup.cfg.gain_threshold_m = c.gain_threshold_m;
    setup.cfg.uplink_power_w = c.uplink_power_w;
    setup.cfg.message_energy_j = c.message_energy_j;
    setup.cfg.stuck_window_s = c.stuck_window_s;
    setup.cfg.progress_eps_m = c.progress_eps_m;
    setup.cfg.edge_slots = c.edge_slots;
    setup.cfg.local_goal_lead_m = c.local_goal_lead_m;
    setup.cfg.tracker =
        TrackerConfig{c.lookahead_m, c.planner.v_ref_mps, c.planner.omega_max_radps, c.tracker_goal_tolerance_m};
    setup.cfg.edge_planner = c.planner.rep_config();
    setup.nfc_env = make_env(sc.radio, sc.radio.nfc, BeamModel::near_field);
    setup.ffc_env = make_env(sc.radio, sc.radio.ffc, BeamModel::planar);
    setup.time_limit_s = sc.time_limit_s;
    const ConvexPolygon fp = ConvexPolygon::axis_aligned_box({0, 0}, c.footprint_half_extent_m,
                                                             c.footprint_half_extent_m);
    for (const auto& r : c.robots) {
        RobotAgent agent;
        agent.id = r.id;
        agent.state.position = {r.start.x, r.start.y};
        agent.state.heading = wrap_angle(r.start.theta);
        agent.state.footprint = fp;
        agent.target_path = r.path;
        setup.robots.push_back(std::move(agent));
    }
    return setup;
}

// ---------------------------------------------------------------------------
// CSV emitters
// ---------------------------------------------------------------------------

inline std::string trace_to_csv(const EpisodeTrace& trace) {
    std::string out = "t,x,y,theta,v,omega,rate_bps,clearance_m,variant,seed\n";
    for (const auto& r : trace.rows)
        out += fmt_num(r.t) + "," + fmt_num(r.state.position.x) + "," + fmt_num(r.state.position.y) + "," +
               fmt_num(r.state.heading) + "," + fmt_num(r.u.v) + "," + fmt_num(r.u.omega) + "," +
               fmt_num(r.rate_bps) + "," + fmt_num(r.clearance_m) + "," + variant_name(trace.variant) + "," +
               std::to_string(trace.seed) + "\n";
    return out;
}

inline std::string fleet_to_csv(const FleetTrace& trace) {
    std::string out = "t,robot_id,x,y,status,engaged,sinr_db,gain_m,energy_j\n";
    for (const auto& r : trace.rows)
        out += fmt_num(r.t) + "," + std::to_string(r.robot_id) + "," + fmt_num(r.position.x) + "," +
               fmt_num(r.position.y) + "," + to_string(r.status) + "," + (r.engaged ? "1" : "0") + "," +
               fmt_num(r.sinr_db) + "," + fmt_num(r.gain_m) + "," + fmt_num(r.energy_j) + "\n";
    return out;
}

inline std::string events_to_csv(const FleetTrace& trace) {
    std::string out = "t,robot_id,reason\n";
    for (const auto& e : trace.events)
        out += fmt_num(e.t) + "," + std::to_string(e.robot_id) + "," + to_string(e.reason) + "\n";
    return out;
}

inline std::string vbf_report_to_csv(const VbfReport& report) {
    std::string out = "frame_id,selected,p_min_w,score\n";
    for (const auto& d : report.decisions)
        out += std::to_string(d.id) + "," + (d.selected ? "1" : "0") + "," + fmt_num(d.p_min_w) + "," +
               fmt_num(d.score) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Top-level run
// ---------------------------------------------------------------------------

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> variant;
};

namespace detail {

class OutputSet {
  public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void emit(const std::string& name, const std::string& contents) {
        const std::string checksum = hex64(fnv1a64(contents));
        write_file(dir_ + "/" + name, contents);
        std::lock_guard<std::mutex> lk(mutex_);
        checksums_[name] = checksum;
    }

    void remove_all() {
        std::lock_guard<std::mutex> lk(mutex_);
        for (const auto& [name, sum] : checksums_) {
            std::error_code ec;
            std::filesystem::remove(dir_ + "/" + name, ec);
        }
        checksums_.clear();
    }

    std::map<std::string, std::string> checksums() const {
        std::lock_guard<std::mutex> lk(mutex_);
        return checksums_;
    }

  private:
    std::string dir_;
    mutable std::mutex mutex_;
    std::map<std::string, std::string> checksums_;
};

inline bool want(const RunOptions& opt, const std::string& variant) {
    return !opt.variant || *opt.variant == variant;
}
inline bool want(const RunOptions& opt, std::uint64_t seed) { return !opt.seed || *opt.seed == seed; }

} // namespace detail

inline RunManifest run_scenario(const Scenario& sc, const std::string& out_dir, const RunOptions& opt = {}) {
    detail::OutputSet outputs(out_dir);
    RunManifest manifest;
    const std::string resolved = serialize_scenario(sc);
    manifest.scenario_hash = hex64(fnv1a64(resolved));
    for (std::uint64_t s : sc.seeds)
        if (detail::want(opt, s))
            manifest.seeds.push_back(s);

    try {
        outputs.emit("scenario_resolved.json", resolved);
        std::vector<std::function<void()>> jobs;

        if (sc.kind == TaskKind::rep) {
            const RepEpisodeSetup setup = make_rep_setup(sc);
            std::mutex summary_mutex;
            auto summary = std::make_shared<std::map<std::pair<std::string, std::uint64_t>, std::string>>();
            for (const RepVariant variant :
                 {RepVariant::rep, RepVariant::nfc, RepVariant::ffc, RepVariant::nfc_planar}) {
                if (!detail::want(opt, variant_name(variant)))
                    continue;
                for (std::uint64_t seed : manifest.seeds) {
                    jobs.emplace_back([&, variant, seed] {
                        const EpisodeTrace trace = run_episode(setup, variant, seed);
                        outputs.emit("trace_" + variant_name(variant) + "_" + std::to_string(seed) + ".csv",
                                     trace_to_csv(trace));
                        std::string row = variant_name(trace.variant) + "," + std::to_string(seed) + "," +
                                          fmt_num(trace.mean_rate_bps) + "," + fmt_num(trace.min_clearance_m) +
                                          "," + fmt_num(trace.min_array_distance_m) + "," +
                                          (trace.reached_goal ? "1" : "0") + "," + fmt_num(trace.duration_s) +
                                          "\n";
                        std::lock_guard<std::mutex> lk(summary_mutex);
                        (*summary)[{variant_name(trace.variant), seed}] = std::move(row);
                    });
                }
            }
            run_jobs(std::move(jobs));
            std::string csv = "variant,seed,mean_rate_bps,min_clearance_m,min_array_dist_m,reached_goal,"
                              "duration_s\n";
            for (const auto& [key, row] : *summary)
                csv += row;
            outputs.emit("summary.csv", csv);
        } else if (sc.kind == TaskKind::vbf) {
            const auto frames = make_vbf_frames(sc);
            outputs.emit("frames.csv", frames_to_csv(frames));
            const LinkEnv near_env = make_env(sc.radio, sc.radio.nfc, BeamModel::near_field);
            const LinkEnv planar_env = make_env(sc.radio, sc.radio.nfc, BeamModel::planar);
            const bool has_ffc = sc.radio.has_ffc;
            const LinkEnv ffc_env = has_ffc ? make_env(sc.radio, sc.radio.ffc, BeamModel::planar) : near_env;
            const BudgetMode mode = sc.vbf.mode();

            std::string summary = "variant,total_score,frames_selected,total_power_w,delivered_bits\n";
            for (const VbfVariant variant : {VbfVariant::vbf, VbfVariant::nfc_throughput, VbfVariant::ffc,
                                             VbfVariant::nfc_planar}) {
                if (!detail::want(opt, variant_name(variant)))
                    continue;
                if (variant == VbfVariant::ffc && !has_ffc)
                    continue;
                const LinkEnv& env = variant == VbfVariant::ffc          ? ffc_env
                                     : variant == VbfVariant::nfc_planar ? planar_env
                                                                         : near_env;
                const VbfReport report =
                    run_vbf_episode(frames, env, mode, sc.vbf.power_budget_w, variant);
                outputs.emit("vbf_report_" + variant_name(variant) + ".csv", vbf_report_to_csv(report));
                summary += variant_name(variant) + "," + fmt_num(report.total_score) + "," +
                           std::to_string(report.frames_selected) + "," + fmt_num(report.total_power_w) + "," +
                           fmt_num(report.delivered_bits) + "\n";
            }
            outputs.emit("vbf_summary.csv", summary);

            if (!sc.vbf.budget_sweep_w.empty()) {
                std::string sweep = "power_budget_w,variant,total_score,frames_selected\n";
                for (double budget : sc.vbf.budget_sweep_w) {
                    for (const VbfVariant variant : {VbfVariant::vbf, VbfVariant::nfc_throughput}) {
                        const VbfReport r = run_vbf_episode(frames, near_env, mode, budget, variant);
                        sweep += fmt_num(budget) + "," + variant_name(variant) + "," + fmt_num(r.total_score) +
                                 "," + std::to_string(r.frames_selected) + "\n";
                    }
                }
                outputs.emit("vbf_sweep.csv", sweep);
            }

            if (sc.vbf.has_heatmap) {
                const Vec2 pose = sc.vbf.heatmap_pose;
                const auto emit_beam = [&](const std::string& name, const LinkEnv& env) {
                    const ChannelVector model = env.beam_model == BeamModel::near_field
                                                    ? los_channel_near(env.geom, pose, env.pathloss)
                                                    : los_channel_far(env.geom, pose, env.pathloss);
                    const Heatmap hm = gain_heatmap(env.geom, mrt_beam(model), sc.vbf.heatmap_region,
                                                    sc.vbf.heatmap_resolution_m, env.pathloss);
                    outputs.emit(name, heatmap_to_string(hm));
                };
                emit_beam("beam_VBF.txt", near_env);
                if (has_ffc)
                    emit_beam("beam_FFC.txt", ffc_env);
                emit_beam("beam_NFC-Planar.txt", planar_env);
            }
        } else {
            const OcnSetup setup = make_ocn_setup(sc);
            std::mutex summary_mutex;
            auto summary = std::make_shared<std::map<std::pair<std::string, std::uint64_t>, std::string>>();
            for (const OcnVariant variant : {OcnVariant::ocn, OcnVariant::nfc_always, OcnVariant::ffc_always}) {
                if (!detail::want(opt, variant_name(variant)))
                    continue;
                for (std::uint64_t seed : manifest.seeds) {
                    jobs.emplace_back([&, variant, seed] {
                        const FleetTrace trace = run_ocn(setup, variant, seed);
                        const std::string tag = variant_name(variant) + "_" + std::to_string(seed);
                        outputs.emit("fleet_" + tag + ".csv", fleet_to_csv(trace));
                        outputs.emit("events_" + tag + ".csv", events_to_csv(trace));
                        std::string rows;
                        for (const auto& a : trace.final_agents)
                            rows += variant_name(variant) + "," + std::to_string(seed) + "," +
                                    std::to_string(a.id) + "," + std::to_string(a.engagements) + "," +
                                    fmt_num(a.comm_energy_j) + "," +
                                    (a.status == AgentStatus::done ? "1" : "0") + "," +
                                    fmt_num(a.done_time_s) + "," + fmt_num(a.min_clearance_m) + "\n";
                        std::lock_guard<std::mutex> lk(summary_mutex);
                        (*summary)[{variant_name(variant), seed}] = std::move(rows);
                    });
                }
            }
            run_jobs(std::move(jobs));
            std::string csv = "variant,seed,robot_id,engagements,energy_j,done,done_time_s,min_clearance_m\n";
            for (const auto& [key, rows] : *summary)
                csv += rows;
            outputs.emit("ocn_summary.csv", csv);
        }

        manifest.file_checksums = outputs.checksums();
        outputs.emit("manifest.json", manifest_to_json(manifest).dump(2) + "\n");
        return manifest;
    } catch (...) {
        outputs.remove_all();
        throw;
    }
}

} // namespace neei
