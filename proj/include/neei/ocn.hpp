#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "neei/errors.hpp"
#include "neei/link.hpp"
#include "neei/rep.hpp"
#include "neei/world.hpp"

namespace neei {

enum class AgentStatus { local, collaborating, done };
enum class DecisionReason { no_gain, sinr_blocked, engaged, blocked_environment };

inline std::string to_string(AgentStatus s) {
    switch (s) {
    case AgentStatus::local:
        return "local";
    case AgentStatus::collaborating:
        return "collaborating";
    default:
        return "done";
    }
}

inline std::string to_string(DecisionReason r) {
    switch (r) {
    case DecisionReason::no_gain:
        return "no-gain";
    case DecisionReason::sinr_blocked:
        return "sinr-blocked";
    case DecisionReason::engaged:
        return "engaged";
    default:
        return "blocked-environment";
    }
}

struct OcnConfig {
    double sinr_gate_db = 20.0;
    double gain_threshold_m = 0.05; // G_min
    double uplink_power_w = 0.1;
    double message_energy_j = 0.1;
    double stuck_window_s = 1.0;
    double progress_eps_m = 0.05;
    int edge_slots = 2; // concurrent collaborating robots the edge serves
    double local_goal_lead_m = 1.5;
    TrackerConfig tracker;
    RepConfig edge_planner; // radio-agnostic advanced planner (radio_weight = 0)
};

struct RobotAgent {
    int id = 0;
    RobotState state;
    std::vector<Vec2> target_path;
    AgentStatus status = AgentStatus::local;
    double comm_energy_j = 0.0;
    int engagements = 0;
    double done_time_s = -1.0;
    double min_clearance_m = std::numeric_limits<double>::infinity();
    // engagement execution
    std::vector<ControlInput> edge_controls;
    std::size_t edge_step = 0;
    double engaged_until_s = -1.0;
    // stall detection
    std::deque<std::pair<double, double>> progress_hist; // (t, arc-length)
};

struct CollaborationDecision {
    bool engage = false;
    double predicted_gain_m = 0.0;
    double sinr_db = 0.0;
    DecisionReason reason = DecisionReason::no_gain;
    std::vector<ControlInput> edge_controls; // populated when the edge plan exists
};

// Local tracker control with a stop governor: if executing the tracker
// control would dip below the safety distance, the robot holds still.
inline ControlInput local_control(const RobotAgent& agent, const World& world, double t, const OcnConfig& cfg) {
    const ControlInput u = path_waypoint_tracker(agent.target_path, agent.state, cfg.tracker);
    const RobotState next = step_dynamics(agent.state, u, cfg.edge_planner.dt);
    if (!planning_clearance_at_least(next, world, t + cfg.edge_planner.dt, cfg.edge_planner.safety_distance))
        return {0.0, 0.0};
    return u;
}

struct GainProbe {
    double gain_m = 0.0;
    double local_progress_m = 0.0;
    bool edge_plan_feasible = false;
    std::vector<ControlInput> edge_controls;
};

// Predicted collaboration gain: arc-length advance along the target path of
// the edge plan over the horizon minus that of the local tracker rollout.
inline GainProbe collaboration_gain(const RobotAgent& agent, const World& world, double t, const OcnConfig& cfg,
                                    std::uint64_t rng_seed) {
    GainProbe probe;
    const double s0 = path_progress(agent.target_path, agent.state.position);

    RobotAgent ghost = agent;
    for (int k = 0; k < cfg.edge_planner.horizon; ++k) {
        const ControlInput u = local_control(ghost, world, t + k * cfg.edge_planner.dt, cfg);
        ghost.state = step_dynamics(ghost.state, u, cfg.edge_planner.dt);
    }
    probe.local_progress_m = path_progress(agent.target_path, ghost.state.position) - s0;

    RepConfig edge_cfg = cfg.edge_planner;
    edge_cfg.radio_weight = 0.0;
    edge_cfg.rng_seed = rng_seed;
    edge_cfg.goal = path_point_at(agent.target_path, s0 + cfg.local_goal_lead_m);
    try {
        PlanResult plan_result = plan(agent.state, world, edge_cfg, nullptr, t);
        probe.edge_plan_feasible = true;
        probe.edge_controls = std::move(plan_result.controls);
        const double edge_progress =
            path_progress(agent.target_path, plan_result.states.back().position) - s0;
        probe.gain_m = edge_progress - probe.local_progress_m;
    } catch (const NoFeasiblePlan&) {
        probe.gain_m = 0.0; // environment admits no plan at all
    }
    return probe;
}

// Gate evaluation for one stuck agent. Interferer cross gains are taken
// against the agent's matched uplink combiner.
inline CollaborationDecision decide(const RobotAgent& agent, const World& world, double t, const OcnConfig& cfg,
                                    const LinkEnv& env, const std::vector<Vec2>& interferer_positions,
                                    bool stuck, std::uint64_t rng_seed) {
    CollaborationDecision decision;
    const double self_gain = focus_gain(env.geom, env.pathloss, agent.state.position);
    std::vector<Interferer> interferers;
    interferers.reserve(interferer_positions.size());
    for (Vec2 p : interferer_positions)
        interferers.push_back({cross_gain(env, agent.state.position, p), cfg.uplink_power_w});
    decision.sinr_db =
        db_from_linear(sinr(self_gain, cfg.uplink_power_w, interferers, env.budget.noise_power_w));

    if (!stuck) {
        decision.reason = DecisionReason::no_gain;
        return decision;
    }
    GainProbe probe = collaboration_gain(agent, world, t, cfg, rng_seed);
    decision.predicted_gain_m = probe.gain_m;
    if (probe.gain_m < cfg.gain_threshold_m) {
        decision.reason = probe.local_progress_m < cfg.progress_eps_m ? DecisionReason::blocked_environment
                                                                      : DecisionReason::no_gain;
        return decision;
    }
    if (decision.sinr_db < cfg.sinr_gate_db) {
        decision.reason = DecisionReason::sinr_blocked;
        return decision;
    }
    decision.engage = true;
    decision.reason = DecisionReason::engaged;
    decision.edge_controls = std::move(probe.edge_controls);
    return decision;
}

// ---------------------------------------------------------------------------
// Fleet simulation
// ---------------------------------------------------------------------------

enum class OcnVariant { ocn, nfc_always, ffc_always };

inline std::string variant_name(OcnVariant v) {
    switch (v) {
    case OcnVariant::ocn:
        return "OCN";
    case OcnVariant::nfc_always:
        return "NFC-always";
    default:
        return "FFC-always";
    }
}

struct FleetRow {
    double t = 0.0;
    int robot_id = 0;
    Vec2 position;
    AgentStatus status = AgentStatus::local;
    bool engaged = false;
    double sinr_db = 0.0;
    double gain_m = 0.0;
    double energy_j = 0.0;
};

struct EngagementEvent {
    double t = 0.0;
    int robot_id = 0;
    DecisionReason reason = DecisionReason::no_gain;
    double sinr_db = 0.0;
    double gain_m = 0.0;
};

struct FleetTrace {
    OcnVariant variant = OcnVariant::ocn;
    std::uint64_t seed = 0;
    std::vector<FleetRow> rows;
    std::vector<EngagementEvent> events;
    std::vector<RobotAgent> final_agents;
    double fleet_energy_j = 0.0;
    bool all_done = false;
};

struct OcnSetup {
    World world;
    std::vector<RobotAgent> robots;
    OcnConfig cfg;
    LinkEnv nfc_env; // matched near-field uplink
    LinkEnv ffc_env; // far-field baseline array
    double time_limit_s = 60.0;
};

// Synchronous lockstep fleet loop. OCN engages the edge only through the
// MPCO gates and bills per engagement window; the always-on baselines keep
// exchanging messages every tick at the power required to hold the SINR
// target on their array, whether or not collaboration helps.
inline FleetTrace run_ocn(const OcnSetup& setup, OcnVariant variant, std::uint64_t seed) {
    FleetTrace trace;
    trace.variant = variant;
    trace.seed = seed;
    const OcnConfig& cfg = setup.cfg;
    const double dt = cfg.edge_planner.dt;
    const LinkEnv& gate_env = setup.nfc_env;
    const LinkEnv& billing_env = variant == OcnVariant::ffc_always ? setup.ffc_env : setup.nfc_env;
    const double sinr_gate_linear = linear_from_db(cfg.sinr_gate_db);

    std::vector<RobotAgent> agents = setup.robots;
    for (auto& a : agents)
        a.progress_hist.emplace_back(0.0, path_progress(a.target_path, a.state.position));

    const int max_ticks = static_cast<int>(std::ceil(setup.time_limit_s / dt));
    for (int tick = 0; tick < max_ticks; ++tick) {
        const double t = tick * dt;
        bool any_active = false;
        for (const auto& a : agents)
            any_active |= a.status != AgentStatus::done;
        if (!any_active)
            break;

        // interference snapshot: positions of robots holding an engagement
        std::vector<Vec2> engaged_positions;
        int active_collabs = 0;
        for (const auto& a : agents)
            if (a.status != AgentStatus::done && a.engaged_until_s > t + 1e-9) {
                engaged_positions.push_back(a.state.position);
                ++active_collabs;
            }

        // gate evaluation for stuck, unengaged robots; at most one new
        // engagement per tick, largest predicted gain first
        std::vector<CollaborationDecision> decisions(agents.size());
        std::vector<char> evaluated(agents.size(), 0);
        int engage_pick = -1;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            auto& a = agents[i];
            if (a.status == AgentStatus::done || a.engaged_until_s > t + 1e-9)
                continue;
            const auto& hist = a.progress_hist;
            const bool window_full = t - hist.front().first >= cfg.stuck_window_s - 1e-9;
            const double recent = hist.back().second - hist.front().second;
            const bool stuck = window_full && recent < cfg.progress_eps_m;
            if (!stuck)
                continue;
            decisions[i] = decide(a, setup.world, t, cfg, gate_env, engaged_positions, true,
                                  mix_seed(seed, mix_seed(static_cast<std::uint64_t>(a.id), tick)));
            if (variant != OcnVariant::ocn && decisions[i].reason == DecisionReason::sinr_blocked) {
                // always-on baselines transmit regardless of the SINR gate
                decisions[i].engage = true;
                decisions[i].reason = DecisionReason::engaged;
            }
            evaluated[i] = 1;
            if (decisions[i].engage && active_collabs < cfg.edge_slots &&
                (engage_pick < 0 || decisions[i].predicted_gain_m > decisions[engage_pick].predicted_gain_m))
                engage_pick = static_cast<int>(i);
        }
        for (std::size_t i = 0; i < agents.size(); ++i) {
            if (!evaluated[i])
                continue;
            auto reason = decisions[i].reason;
            if (decisions[i].engage && static_cast<int>(i) != engage_pick)
                continue; // slot-limited or lost the per-tick selection; retried next tick
            if (static_cast<int>(i) == engage_pick) {
                auto& a = agents[i];
                a.edge_controls = std::move(decisions[i].edge_controls);
                a.edge_step = 0;
                a.engaged_until_s = t + cfg.stuck_window_s;
                a.status = AgentStatus::collaborating;
                ++a.engagements;
                if (variant == OcnVariant::ocn)
                    a.comm_energy_j += cfg.message_energy_j + cfg.uplink_power_w * cfg.stuck_window_s;
            }
            trace.events.push_back({t, agents[i].id, reason, decisions[i].sinr_db, decisions[i].predicted_gain_m});
        }

        // controls, billing, stepping
        for (std::size_t i = 0; i < agents.size(); ++i) {
            auto& a = agents[i];
            if (a.status == AgentStatus::done)
                continue;
            if (variant != OcnVariant::ocn)
                a.comm_energy_j +=
                    cfg.message_energy_j + required_power_w(billing_env, a.state.position, sinr_gate_linear) * dt;

            const bool engaged = a.engaged_until_s > t + 1e-9;
            ControlInput u;
            if (engaged && a.edge_step < a.edge_controls.size()) {
                u = a.edge_controls[a.edge_step++];
            } else {
                a.status = AgentStatus::local;
                u = local_control(a, setup.world, t, cfg);
            }
            if (engaged)
                a.status = AgentStatus::collaborating;

            FleetRow row;
            row.t = t;
            row.robot_id = a.id;
            row.position = a.state.position;
            row.status = a.status;
            row.engaged = engaged;
            row.sinr_db = evaluated[i] ? decisions[i].sinr_db : 0.0;
            row.gain_m = evaluated[i] ? decisions[i].predicted_gain_m : 0.0;
            row.energy_j = a.comm_energy_j;
            trace.rows.push_back(row);

            a.min_clearance_m = std::min(a.min_clearance_m, clearance(a.state, setup.world, t));
            a.state = step_dynamics(a.state, u, dt);
            const double t_next = t + dt;
            const double s_now = path_progress(a.target_path, a.state.position);
            if (!engaged && a.engaged_until_s > 0.0 && a.engaged_until_s <= t + 1e-9) {
                // engagement just ended: restart the stall window before re-gating
                a.progress_hist.clear();
                a.engaged_until_s = -1.0;
            }
            a.progress_hist.emplace_back(t_next, s_now);
            while (a.progress_hist.size() > 1 &&
                   a.progress_hist.front().first < t_next - cfg.stuck_window_s - 1e-9)
                a.progress_hist.pop_front();

            if (distance(a.state.position, a.target_path.back()) <= cfg.tracker.goal_tolerance_m) {
                a.status = AgentStatus::done;
                a.done_time_s = t_next;
                a.min_clearance_m = std::min(a.min_clearance_m, clearance(a.state, setup.world, t_next));
            }
        }
    }

    trace.all_done = true;
    for (auto& a : agents) {
        trace.all_done &= a.status == AgentStatus::done;
        trace.fleet_energy_j += a.comm_energy_j;
    }
    trace.final_agents = std::move(agents);
    return trace;
}

} // namespace neei
