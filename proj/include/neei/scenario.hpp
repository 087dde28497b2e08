#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "neei/channel.hpp"
#include "neei/errors.hpp"
#include "neei/geometry.hpp"
#include "neei/io.hpp"
#include "neei/link.hpp"
#include "neei/ocn.hpp"
#include "neei/rep.hpp"
#include "neei/vbf.hpp"
#include "neei/world.hpp"

namespace neei {

using json = nlohmann::ordered_json;

inline constexpr int kScenarioSchemaVersion = 1;

namespace detail {

// Strict accessor: every key must be consumed, leftovers are rejected.
class StrictObj {
  public:
    StrictObj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object())
            throw ValidationError(path_ + " must be an object");
    }
    ~StrictObj() = default;

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        if (!j_.contains(key))
            throw ValidationError(path_ + " is missing required key '" + key + "'");
        used_.insert(key);
        return j_.at(key);
    }
    const json* opt(const std::string& key) {
        if (!j_.contains(key))
            return nullptr;
        used_.insert(key);
        return &j_.at(key);
    }

    double num(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number())
            throw ValidationError(path_ + "." + key + " must be a number");
        return v.get<double>();
    }
    double num_or(const std::string& key, double dflt) { return has(key) ? num(key) : dflt; }

    // a number, or the string "inf"
    double num_or_inf(const std::string& key, double dflt) {
        if (!has(key))
            return dflt;
        const json& v = raw(key);
        if (v.is_string() && v.get<std::string>() == "inf")
            return std::numeric_limits<double>::infinity();
        if (!v.is_number())
            throw ValidationError(path_ + "." + key + " must be a number or \"inf\"");
        return v.get<double>();
    }

    int integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer())
            throw ValidationError(path_ + "." + key + " must be an integer");
        return v.get<int>();
    }
    int integer_or(const std::string& key, int dflt) { return has(key) ? integer(key) : dflt; }

    std::string str(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string())
            throw ValidationError(path_ + "." + key + " must be a string");
        return v.get<std::string>();
    }
    std::string str_or(const std::string& key, const std::string& dflt) { return has(key) ? str(key) : dflt; }

    void reject_unknown() const {
        for (const auto& item : j_.items())
            if (!used_.count(item.key()))
                throw ValidationError(path_ + " has unknown key '" + item.key() + "'");
    }

    const std::string& path() const { return path_; }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

inline Vec2 vec2_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(path + " must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Vec2> points_from(const json& j, const std::string& path, std::size_t min_count) {
    if (!j.is_array() || j.size() < min_count)
        throw ValidationError(path + " must list at least " + std::to_string(min_count) + " points");
    std::vector<Vec2> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(vec2_from(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline json to_json(Vec2 v) { return json::array({v.x, v.y}); }

inline json to_json(const std::vector<Vec2>& pts) {
    json out = json::array();
    for (Vec2 p : pts)
        out.push_back(to_json(p));
    return out;
}

} // namespace detail

enum class TaskKind { rep, vbf, ocn };

inline std::string to_string(TaskKind k) {
    switch (k) {
    case TaskKind::rep:
        return "rep";
    case TaskKind::vbf:
        return "vbf";
    default:
        return "ocn";
    }
}

struct ScenarioArray {
    int num_elements = 1;
    double carrier_freq_hz = 30e9;
    double element_spacing_m = 0.0; // 0 -> lambda/2
    Vec2 center{0.0, 0.0};
    Vec2 axis{0.0, 1.0};

    ArrayGeometry geometry() const {
        ArrayGeometry g{num_elements, carrier_freq_hz, element_spacing_m, center, axis.normalized()};
        g.validate();
        return g;
    }
};

struct ScenarioRadio {
    double reference_loss_linear = 0.0; // 0 -> free-space (lambda/4pi)^2 per array
    double pathloss_exponent = 2.0;
    double tx_power_w = 0.1;
    double noise_dbm = -80.0;
    double bandwidth_hz = 200e3;
    ScenarioArray nfc;
    ScenarioArray ffc;
    bool has_ffc = false;
    double rician_k = std::numeric_limits<double>::infinity();
    double nlos_std = 1.0;

    PathlossModel pathloss() const { return {reference_loss_linear, pathloss_exponent}; }
    LinkBudget budget() const { return {tx_power_w, watts_from_dbm(noise_dbm), bandwidth_hz}; }
};

struct ScenarioDynamicObstacle {
    std::vector<Vec2> vertices;
    Vec2 velocity_mps{0.0, 0.0};
    double active_from_s = 0.0;
};

struct ScenarioWorld {
    Rect bounds{0, 0, 0, 0};
    std::vector<std::vector<Vec2>> obstacles;
    std::vector<ScenarioDynamicObstacle> dynamic_obstacles;
    double map_staleness_s = 0.0;

    World build() const {
        World w;
        w.bounds = bounds;
        w.map_staleness_s = map_staleness_s;
        for (const auto& verts : obstacles)
            w.obstacles.emplace_back(verts);
        for (const auto& d : dynamic_obstacles)
            w.dynamic_obstacles.push_back({ConvexPolygon(d.vertices), d.velocity_mps, d.active_from_s});
        return w;
    }
};

struct ScenarioPose {
    double x = 0.0, y = 0.0, theta = 0.0;
};

struct ScenarioPlanner {
    int horizon_steps = 20;
    double dt_s = 0.1;
    double safety_distance_m = 0.1;
    double progress_weight = 1.0;
    double effort_weight = 0.0;
    double v_ref_mps = 0.5;
    double v_max_mps = 0.8;
    double omega_max_radps = 2.0;
    int candidate_count = 256;
    double elite_frac = 0.1;
    int iterations = 4;

    RepConfig rep_config() const {
        RepConfig cfg;
        cfg.horizon = horizon_steps;
        cfg.dt = dt_s;
        cfg.safety_distance = safety_distance_m;
        cfg.progress_weight = progress_weight;
        cfg.effort_weight = effort_weight;
        cfg.v_ref = v_ref_mps;
        cfg.v_max = v_max_mps;
        cfg.omega_max = omega_max_radps;
        cfg.candidate_count = candidate_count;
        cfg.elite_frac = elite_frac;
        cfg.iterations = iterations;
        cfg.validate();
        return cfg;
    }
};

struct ScenarioRepTask {
    ScenarioPose start;
    Vec2 goal{0.0, 0.0};
    double goal_tolerance_m = 0.3;
    double radio_weight = 0.0;
    ScenarioPlanner planner;
    double footprint_half_extent_m = 0.15;
};

struct ScenarioVbfTask {
    double slot_duration_s = 1.0;
    double payload_bits = 13840000.0;
    std::string budget_mode = "total_power"; // or "per_frame_cap"
    double power_budget_w = 0.0;
    std::vector<double> budget_sweep_w;
    std::vector<Vec2> capture_path;
    int capture_count = 0;
    std::vector<Vec2> training_path;
    int training_count = 0;
    double score_length_scale_m = 0.5;
    double score_angle_scale_rad = M_PI / 4.0;
    Vec2 heatmap_pose{0.0, 0.0};
    Rect heatmap_region{0, 0, 0, 0};
    double heatmap_resolution_m = 0.05;
    bool has_heatmap = false;

    BudgetMode mode() const {
        if (budget_mode == "total_power")
            return BudgetMode::total_power;
        if (budget_mode == "per_frame_cap")
            return BudgetMode::per_frame_cap;
        throw ValidationError("budget_mode must be total_power or per_frame_cap");
    }
};

struct ScenarioOcnRobot {
    int id = 0;
    ScenarioPose start;
    std::vector<Vec2> path;
};

struct ScenarioOcnTask {
    double sinr_gate_db = 20.0;
    double gain_threshold_m = 0.05;
    double uplink_power_w = 0.1;
    double message_energy_j = 0.1;
    double stuck_window_s = 1.0;
    double progress_eps_m = 0.05;
    int edge_slots = 2;
    double local_goal_lead_m = 1.5;
    double lookahead_m = 0.5;
    double tracker_goal_tolerance_m = 0.2;
    ScenarioPlanner planner;
    std::vector<ScenarioOcnRobot> robots;
    double footprint_half_extent_m = 0.15;
};

struct Scenario {
    int schema_version = kScenarioSchemaVersion;
    std::string name;
    ScenarioRadio radio;
    ScenarioWorld world;
    TaskKind kind = TaskKind::rep;
    ScenarioRepTask rep;
    ScenarioVbfTask vbf;
    ScenarioOcnTask ocn;
    std::vector<std::uint64_t> seeds;
    double time_limit_s = 60.0;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

inline ScenarioArray parse_array(const json& j, const std::string& path) {
    StrictObj o(j, path);
    ScenarioArray a;
    a.num_elements = o.integer("num_elements");
    a.carrier_freq_hz = o.num("carrier_freq_hz");
    a.element_spacing_m = o.num_or("element_spacing_m", 0.0);
    a.center = vec2_from(o.raw("center_m"), path + ".center_m");
    a.axis = vec2_from(o.raw("axis"), path + ".axis");
    o.reject_unknown();
    a.geometry(); // validates
    return a;
}

inline ScenarioPose parse_pose(const json& j, const std::string& path) {
    StrictObj o(j, path);
    ScenarioPose p;
    p.x = o.num("x_m");
    p.y = o.num("y_m");
    p.theta = o.num_or("theta_rad", 0.0);
    o.reject_unknown();
    return p;
}

inline ScenarioPlanner parse_planner(const json& j, const std::string& path) {
    StrictObj o(j, path);
    ScenarioPlanner p;
    p.horizon_steps = o.integer_or("horizon_steps", p.horizon_steps);
    p.dt_s = o.num_or("dt_s", p.dt_s);
    p.safety_distance_m = o.num_or("safety_distance_m", p.safety_distance_m);
    p.progress_weight = o.num_or("progress_weight", p.progress_weight);
    p.effort_weight = o.num_or("effort_weight", p.effort_weight);
    p.v_ref_mps = o.num_or("v_ref_mps", p.v_ref_mps);
    p.v_max_mps = o.num_or("v_max_mps", p.v_max_mps);
    p.omega_max_radps = o.num_or("omega_max_radps", p.omega_max_radps);
    p.candidate_count = o.integer_or("candidate_count", p.candidate_count);
    p.elite_frac = o.num_or("elite_frac", p.elite_frac);
    p.iterations = o.integer_or("iterations", p.iterations);
    o.reject_unknown();
    p.rep_config(); // validates
    return p;
}

} // namespace detail

inline Scenario scenario_from_json(const json& root) {
    detail::StrictObj o(root, "scenario");
    Scenario sc;
    sc.schema_version = o.integer("schema_version");
    if (sc.schema_version != kScenarioSchemaVersion)
        throw ValidationError("unsupported schema_version " + std::to_string(sc.schema_version));
    sc.name = o.str("name");

    {
        detail::StrictObj r(o.raw("radio"), "radio");
        {
            detail::StrictObj pl(r.raw("pathloss"), "radio.pathloss");
            sc.radio.reference_loss_linear = pl.num_or("reference_loss_linear", 0.0);
            sc.radio.pathloss_exponent = pl.num("exponent");
            pl.reject_unknown();
            sc.radio.pathloss().validate();
        }
        {
            detail::StrictObj b(r.raw("link_budget"), "radio.link_budget");
            sc.radio.tx_power_w = b.num("tx_power_w");
            sc.radio.noise_dbm = b.num("noise_dbm");
            sc.radio.bandwidth_hz = b.num("bandwidth_hz");
            b.reject_unknown();
            sc.radio.budget().validate();
        }
        {
            detail::StrictObj arrs(r.raw("arrays"), "radio.arrays");
            sc.radio.nfc = detail::parse_array(arrs.raw("nfc"), "radio.arrays.nfc");
            if (arrs.has("ffc")) {
                sc.radio.ffc = detail::parse_array(arrs.raw("ffc"), "radio.arrays.ffc");
                sc.radio.has_ffc = true;
            }
            arrs.reject_unknown();
        }
        if (const json* nl = r.opt("nlos")) {
            detail::StrictObj n(*nl, "radio.nlos");
            sc.radio.rician_k = n.num_or_inf("rician_k_linear", sc.radio.rician_k);
            sc.radio.nlos_std = n.num_or("nlos_std", sc.radio.nlos_std);
            n.reject_unknown();
            NlosParams{sc.radio.rician_k, {0.0, 0.0}, sc.radio.nlos_std}.validate();
        }
        r.reject_unknown();
    }

    {
        detail::StrictObj w(o.raw("world"), "world");
        const json& b = w.raw("bounds_m");
        if (!b.is_array() || b.size() != 4)
            throw ValidationError("world.bounds_m must be [xmin, ymin, xmax, ymax]");
        sc.world.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
        sc.world.bounds.validate();
        if (const json* obs = w.opt("obstacles")) {
            if (!obs->is_array())
                throw ValidationError("world.obstacles must be an array");
            for (std::size_t i = 0; i < obs->size(); ++i) {
                detail::StrictObj ob((*obs)[i], "world.obstacles[" + std::to_string(i) + "]");
                sc.world.obstacles.push_back(
                    detail::points_from(ob.raw("vertices_m"), ob.path() + ".vertices_m", 1));
                ob.reject_unknown();
            }
        }
        if (const json* dyn = w.opt("dynamic_obstacles")) {
            if (!dyn->is_array())
                throw ValidationError("world.dynamic_obstacles must be an array");
            for (std::size_t i = 0; i < dyn->size(); ++i) {
                detail::StrictObj ob((*dyn)[i], "world.dynamic_obstacles[" + std::to_string(i) + "]");
                ScenarioDynamicObstacle d;
                d.vertices = detail::points_from(ob.raw("vertices_m"), ob.path() + ".vertices_m", 1);
                d.velocity_mps = detail::vec2_from(ob.raw("velocity_mps"), ob.path() + ".velocity_mps");
                d.active_from_s = ob.num_or("active_from_s", 0.0);
                ob.reject_unknown();
                sc.world.dynamic_obstacles.push_back(std::move(d));
            }
        }
        sc.world.map_staleness_s = w.num_or("map_staleness_s", 0.0);
        w.reject_unknown();
        sc.world.build(); // validates the polygons
    }

    {
        detail::StrictObj t(o.raw("task"), "task");
        const std::string type = t.str("type");
        if (type == "rep") {
            sc.kind = TaskKind::rep;
            sc.rep.start = detail::parse_pose(t.raw("start_pose"), "task.start_pose");
            sc.rep.goal = detail::vec2_from(t.raw("goal_m"), "task.goal_m");
            sc.rep.goal_tolerance_m = t.num_or("goal_tolerance_m", sc.rep.goal_tolerance_m);
            sc.rep.radio_weight = t.num_or("radio_weight", 0.0);
            sc.rep.planner = detail::parse_planner(t.raw("planner"), "task.planner");
            sc.rep.footprint_half_extent_m = t.num_or("footprint_half_extent_m", 0.15);
        } else if (type == "vbf") {
            sc.kind = TaskKind::vbf;
            auto& v = sc.vbf;
            v.slot_duration_s = t.num_or("slot_duration_s", v.slot_duration_s);
            v.payload_bits = t.num_or("payload_bits", v.payload_bits);
            v.budget_mode = t.str_or("budget_mode", v.budget_mode);
            v.power_budget_w = t.num("power_budget_w");
            if (const json* sw = t.opt("budget_sweep_w")) {
                if (!sw->is_array())
                    throw ValidationError("task.budget_sweep_w must be an array of watts");
                for (const auto& x : *sw)
                    v.budget_sweep_w.push_back(x.get<double>());
            }
            v.capture_path = detail::points_from(t.raw("capture_path_m"), "task.capture_path_m", 2);
            v.capture_count = t.integer("capture_count");
            v.training_path = detail::points_from(t.raw("training_path_m"), "task.training_path_m", 2);
            v.training_count = t.integer("training_count");
            v.score_length_scale_m = t.num_or("score_length_scale_m", v.score_length_scale_m);
            v.score_angle_scale_rad = t.num_or("score_angle_scale_rad", v.score_angle_scale_rad);
            if (const json* hm = t.opt("heatmap")) {
                detail::StrictObj h(*hm, "task.heatmap");
                v.heatmap_pose = detail::vec2_from(h.raw("pose_m"), "task.heatmap.pose_m");
                const json& reg = h.raw("region_m");
                if (!reg.is_array() || reg.size() != 4)
                    throw ValidationError("task.heatmap.region_m must be [xmin, ymin, xmax, ymax]");
                v.heatmap_region = {reg[0].get<double>(), reg[1].get<double>(), reg[2].get<double>(),
                                    reg[3].get<double>()};
                v.heatmap_region.validate();
                v.heatmap_resolution_m = h.num_or("resolution_m", v.heatmap_resolution_m);
                h.reject_unknown();
                v.has_heatmap = true;
            }
            v.mode();
            if (v.capture_count < 1 || v.training_count < 1)
                throw ValidationError("task capture_count and training_count must be >= 1");
            if (!(v.payload_bits > 0.0))
                throw ValidationError("task.payload_bits must be positive");
        } else if (type == "ocn") {
            sc.kind = TaskKind::ocn;
            auto& c = sc.ocn;
            c.sinr_gate_db = t.num_or("sinr_gate_db", c.sinr_gate_db);
            c.gain_threshold_m = t.num_or("gain_threshold_m", c.gain_threshold_m);
            c.uplink_power_w = t.num_or("uplink_power_w", c.uplink_power_w);
            c.message_energy_j = t.num_or("message_energy_j", c.message_energy_j);
            c.stuck_window_s = t.num_or("stuck_window_s", c.stuck_window_s);
            c.progress_eps_m = t.num_or("progress_eps_m", c.progress_eps_m);
            c.edge_slots = t.integer_or("edge_slots", c.edge_slots);
            c.local_goal_lead_m = t.num_or("local_goal_lead_m", c.local_goal_lead_m);
            {
                detail::StrictObj tr(t.raw("tracker"), "task.tracker");
                c.lookahead_m = tr.num_or("lookahead_m", c.lookahead_m);
                c.tracker_goal_tolerance_m = tr.num_or("goal_tolerance_m", c.tracker_goal_tolerance_m);
                tr.reject_unknown();
            }
            c.planner = detail::parse_planner(t.raw("planner"), "task.planner");
            c.footprint_half_extent_m = t.num_or("footprint_half_extent_m", 0.15);
            const json& robots = t.raw("robots");
            if (!robots.is_array() || robots.empty())
                throw ValidationError("task.robots must be a nonempty array");
            for (std::size_t i = 0; i < robots.size(); ++i) {
                detail::StrictObj rb(robots[i], "task.robots[" + std::to_string(i) + "]");
                ScenarioOcnRobot r;
                r.id = rb.integer("id");
                r.start = detail::parse_pose(rb.raw("start_pose"), rb.path() + ".start_pose");
                r.path = detail::points_from(rb.raw("path_m"), rb.path() + ".path_m", 2);
                rb.reject_unknown();
                c.robots.push_back(std::move(r));
            }
        } else {
            throw ValidationError("task.type must be rep, vbf or ocn");
        }
        t.reject_unknown();
    }

    {
        const json& s = o.raw("seeds");
        if (!s.is_array() || s.empty())
            throw ValidationError("seeds must be a nonempty array of integers");
        for (const auto& x : s) {
            if (!x.is_number_integer())
                throw ValidationError("seeds must be integers");
            sc.seeds.push_back(x.get<std::uint64_t>());
        }
    }
    sc.time_limit_s = o.num("time_limit_s");
    if (!(sc.time_limit_s > 0.0))
        throw ValidationError("time_limit_s must be positive");
    o.reject_unknown();
    return sc;
}

inline json scenario_to_json(const Scenario& sc) {
    json root;
    root["schema_version"] = sc.schema_version;
    root["name"] = sc.name;

    json radio;
    radio["pathloss"] = {{"reference_loss_linear", sc.radio.reference_loss_linear},
                         {"exponent", sc.radio.pathloss_exponent}};
    radio["link_budget"] = {{"tx_power_w", sc.radio.tx_power_w},
                            {"noise_dbm", sc.radio.noise_dbm},
                            {"bandwidth_hz", sc.radio.bandwidth_hz}};
    const auto array_json = [](const ScenarioArray& a) {
        json j;
        j["num_elements"] = a.num_elements;
        j["carrier_freq_hz"] = a.carrier_freq_hz;
        j["element_spacing_m"] = a.element_spacing_m;
        j["center_m"] = detail::to_json(a.center);
        j["axis"] = detail::to_json(a.axis);
        return j;
    };
    radio["arrays"]["nfc"] = array_json(sc.radio.nfc);
    if (sc.radio.has_ffc)
        radio["arrays"]["ffc"] = array_json(sc.radio.ffc);
    if (!std::isinf(sc.radio.rician_k))
        radio["nlos"] = {{"rician_k_linear", sc.radio.rician_k}, {"nlos_std", sc.radio.nlos_std}};
    root["radio"] = radio;

    json world;
    world["bounds_m"] =
        json::array({sc.world.bounds.xmin, sc.world.bounds.ymin, sc.world.bounds.xmax, sc.world.bounds.ymax});
    world["obstacles"] = json::array();
    for (const auto& verts : sc.world.obstacles)
        world["obstacles"].push_back({{"vertices_m", detail::to_json(verts)}});
    world["dynamic_obstacles"] = json::array();
    for (const auto& d : sc.world.dynamic_obstacles)
        world["dynamic_obstacles"].push_back({{"vertices_m", detail::to_json(d.vertices)},
                                              {"velocity_mps", detail::to_json(d.velocity_mps)},
                                              {"active_from_s", d.active_from_s}});
    world["map_staleness_s"] = sc.world.map_staleness_s;
    root["world"] = world;

    const auto planner_json = [](const ScenarioPlanner& p) {
        json j;
        j["horizon_steps"] = p.horizon_steps;
        j["dt_s"] = p.dt_s;
        j["safety_distance_m"] = p.safety_distance_m;
        j["progress_weight"] = p.progress_weight;
        j["effort_weight"] = p.effort_weight;
        j["v_ref_mps"] = p.v_ref_mps;
        j["v_max_mps"] = p.v_max_mps;
        j["omega_max_radps"] = p.omega_max_radps;
        j["candidate_count"] = p.candidate_count;
        j["elite_frac"] = p.elite_frac;
        j["iterations"] = p.iterations;
        return j;
    };
    const auto pose_json = [](const ScenarioPose& p) {
        return json{{"x_m", p.x}, {"y_m", p.y}, {"theta_rad", p.theta}};
    };

    json task;
    task["type"] = to_string(sc.kind);
    if (sc.kind == TaskKind::rep) {
        task["start_pose"] = pose_json(sc.rep.start);
        task["goal_m"] = detail::to_json(sc.rep.goal);
        task["goal_tolerance_m"] = sc.rep.goal_tolerance_m;
        task["radio_weight"] = sc.rep.radio_weight;
        task["planner"] = planner_json(sc.rep.planner);
        task["footprint_half_extent_m"] = sc.rep.footprint_half_extent_m;
    } else if (sc.kind == TaskKind::vbf) {
        const auto& v = sc.vbf;
        task["slot_duration_s"] = v.slot_duration_s;
        task["payload_bits"] = v.payload_bits;
        task["budget_mode"] = v.budget_mode;
        task["power_budget_w"] = v.power_budget_w;
        if (!v.budget_sweep_w.empty())
            task["budget_sweep_w"] = v.budget_sweep_w;
        task["capture_path_m"] = detail::to_json(v.capture_path);
        task["capture_count"] = v.capture_count;
        task["training_path_m"] = detail::to_json(v.training_path);
        task["training_count"] = v.training_count;
        task["score_length_scale_m"] = v.score_length_scale_m;
        task["score_angle_scale_rad"] = v.score_angle_scale_rad;
        if (v.has_heatmap)
            task["heatmap"] = {{"pose_m", detail::to_json(v.heatmap_pose)},
                               {"region_m", json::array({v.heatmap_region.xmin, v.heatmap_region.ymin,
                                                         v.heatmap_region.xmax, v.heatmap_region.ymax})},
                               {"resolution_m", v.heatmap_resolution_m}};
    } else {
        const auto& c = sc.ocn;
        task["sinr_gate_db"] = c.sinr_gate_db;
        task["gain_threshold_m"] = c.gain_threshold_m;
        task["uplink_power_w"] = c.uplink_power_w;
        task["message_energy_j"] = c.message_energy_j;
        task["stuck_window_s"] = c.stuck_window_s;
        task["progress_eps_m"] = c.progress_eps_m;
        task["edge_slots"] = c.edge_slots;
        task["local_goal_lead_m"] = c.local_goal_lead_m;
        task["tracker"] = {{"lookahead_m", c.lookahead_m}, {"goal_tolerance_m", c.tracker_goal_tolerance_m}};
        task["planner"] = planner_json(c.planner);
        task["footprint_half_extent_m"] = c.footprint_half_extent_m;
        task["robots"] = json::array();
        for (const auto& r : c.robots)
            task["robots"].push_back(
                {{"id", r.id}, {"start_pose", pose_json(r.start)}, {"path_m", detail::to_json(r.path)}});
    }
    root["task"] = task;
    root["seeds"] = sc.seeds;
    root["time_limit_s"] = sc.time_limit_s;
    return root;
}

inline std::string serialize_scenario(const Scenario& sc) { return scenario_to_json(sc).dump(2) + "\n"; }

inline Scenario parse_scenario_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario JSON parse failed: ") + e.what());
    }
    return scenario_from_json(root);
}

inline Scenario parse_scenario(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    return parse_scenario_text(text);
}

// ---------------------------------------------------------------------------
// Frame list CSV (id,x,y,theta,score(optional),payload_bits(optional))
// ---------------------------------------------------------------------------

inline std::string frames_to_csv(const std::vector<Frame>& frames) {
    std::string out = "id,x,y,theta,score,payload_bits\n";
    for (const auto& f : frames)
        out += std::to_string(f.id) + "," + fmt_num(f.position.x) + "," + fmt_num(f.position.y) + "," +
               fmt_num(f.heading) + "," + fmt_num(f.score) + "," + fmt_num(f.payload_bits) + "\n";
    return out;
}

inline std::vector<Frame> frames_from_csv(const std::string& text, double default_payload_bits,
                                          double slot_duration_s) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("frame CSV is empty");
    std::vector<std::string> cols;
    {
        std::istringstream hdr(line);
        std::string c;
        while (std::getline(hdr, c, ','))
            cols.push_back(c);
    }
    if (cols.size() < 4 || cols[0] != "id" || cols[1] != "x" || cols[2] != "y" || cols[3] != "theta")
        throw ParseError("frame CSV header must start with id,x,y,theta");
    std::vector<Frame> frames;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ','))
            vals.push_back(std::stod(cell));
        if (vals.size() != cols.size())
            throw ParseError("frame CSV line " + std::to_string(line_no) + " has wrong column count");
        Frame f;
        f.id = static_cast<int>(vals[0]);
        f.position = {vals[1], vals[2]};
        f.heading = vals[3];
        f.payload_bits = default_payload_bits;
        f.slot_duration_s = slot_duration_s;
        for (std::size_t c = 4; c < cols.size(); ++c) {
            if (cols[c] == "score")
                f.score = vals[c];
            else if (cols[c] == "payload_bits")
                f.payload_bits = vals[c];
        }
        frames.push_back(f);
    }
    return frames;
}

} // namespace neei
