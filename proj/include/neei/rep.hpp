#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "neei/errors.hpp"
#include "neei/link.hpp"
#include "neei/rng.hpp"
#include "neei/world.hpp"

namespace neei {

struct RepConfig {
    int horizon = 20;
    double dt = 0.1;
    double safety_distance = 0.1;
    Vec2 goal{0.0, 0.0};
    double goal_tolerance = 0.3;
    double radio_weight = 0.0;    // alpha_r, applied to summed step rewards (bits/s)
    double progress_weight = 1.0; // per meter of goal-distance reduction
    double effort_weight = 0.0;   // per unit of |dv| + |domega|
    double v_ref = 0.5;
    double v_max = 1.0;
    double omega_max = 2.0;
    int candidate_count = 256;
    double elite_frac = 0.1;
    int iterations = 4;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (horizon < 1 || !(dt > 0.0) || safety_distance < 0.0)
            throw ValidationError("rep config: horizon >= 1, dt > 0, safety_distance >= 0 required");
        if (radio_weight < 0.0 || progress_weight < 0.0 || effort_weight < 0.0)
            throw ValidationError("rep config: weights must be >= 0");
        if (candidate_count < 1 || iterations < 1 || !(elite_frac > 0.0) || elite_frac > 1.0)
            throw ValidationError("rep config: candidate_count/iterations >= 1, elite_frac in (0,1]");
    }
};

struct PlanResult {
    std::vector<ControlInput> controls;  // H
    std::vector<RobotState> states;      // H+1
    std::vector<double> predicted_rates; // bits/s per step (H), zero without a radio env
    double cost = 0.0;                   // negated objective; lower is better
    bool feasible = false;
    std::vector<double> iteration_best_costs; // running best after each CEM iteration
};

// Rate at this pose if the edge focuses a matched spherical-wave beam on it.
inline double step_reward_bps(const RobotState& state, const LinkEnv& env, const LinkBudget& budget) {
    return rate_bps(budget, snr(focus_gain(env.geom, env.pathloss, state.position), budget));
}

namespace detail {

struct Rollout {
    std::vector<ControlInput> controls;
    std::vector<RobotState> states;
    double cost = 0.0;
    bool feasible = false;
};

inline bool rollout(const RobotState& start, const World& world, const RepConfig& cfg, const LinkEnv* radio,
                    double t_now, Rollout& out) {
    out.states.clear();
    out.states.push_back(start);
    double radio_sum = 0.0;
    for (int k = 0; k < cfg.horizon; ++k) {
        const RobotState next = step_dynamics(out.states.back(), out.controls[k], cfg.dt);
        if (!planning_clearance_at_least(next, world, t_now + (k + 1) * cfg.dt, cfg.safety_distance)) {
            out.feasible = false;
            return false;
        }
        if (radio != nullptr && cfg.radio_weight > 0.0)
            radio_sum += step_reward_bps(next, *radio, radio->budget);
        out.states.push_back(next);
    }
    double effort = 0.0;
    double pv = start.linear_vel, pw = start.angular_vel;
    for (const auto& u : out.controls) {
        effort += std::fabs(u.v - pv) + std::fabs(u.omega - pw);
        pv = u.v;
        pw = u.omega;
    }
    const double progress = distance(start.position, cfg.goal) - distance(out.states.back().position, cfg.goal);
    const double objective = cfg.radio_weight * radio_sum + cfg.progress_weight * progress - cfg.effort_weight * effort;
    out.cost = -objective;
    out.feasible = true;
    return true;
}

} // namespace detail

// Cross-entropy receding-horizon search over (v, omega) sequences. Samples
// candidate_count rollouts per iteration, discards those dipping below the
// safety distance, refits the Gaussian on the elite fraction and keeps the
// best feasible rollout found so far (injected as candidate 0 of the next
// iteration, so the best cost is non-increasing across iterations).
// Deterministic for a fixed rng_seed; equal-cost ties resolve to the lowest
// candidate index.
inline PlanResult plan(const RobotState& state, const World& world, const RepConfig& cfg, const LinkEnv* radio,
                       double t_now) {
    cfg.validate();
    if (cfg.radio_weight > 0.0 && radio == nullptr)
        throw ValidationError("rep plan: radio_weight > 0 requires a radio environment");
    const int h = cfg.horizon;
    Rng rng(cfg.rng_seed);

    std::vector<double> mean_v(h, cfg.v_ref), mean_w(h, 0.0);
    std::vector<double> std_v(h, std::max(0.25 * cfg.v_max, 0.05));
    std::vector<double> std_w(h, std::max(0.5 * cfg.omega_max, 0.1));
    const double std_v_floor = 0.02, std_w_floor = 0.05;

    detail::Rollout best;
    detail::Rollout cand;
    cand.controls.resize(h);
    std::vector<detail::Rollout> elites_pool;
    std::vector<std::pair<double, int>> ranking;
    std::vector<std::vector<ControlInput>> kept;
    PlanResult result;

    for (int it = 0; it < cfg.iterations; ++it) {
        ranking.clear();
        kept.clear();
        for (int c = 0; c < cfg.candidate_count; ++c) {
            if (c == 0 && best.feasible) {
                cand.controls = best.controls;
            } else {
                for (int k = 0; k < h; ++k) {
                    cand.controls[k].v = std::clamp(rng.normal(mean_v[k], std_v[k]), -cfg.v_max, cfg.v_max);
                    cand.controls[k].omega =
                        std::clamp(rng.normal(mean_w[k], std_w[k]), -cfg.omega_max, cfg.omega_max);
                }
            }
            if (!detail::rollout(state, world, cfg, radio, t_now, cand))
                continue;
            ranking.emplace_back(cand.cost, static_cast<int>(kept.size()));
            kept.push_back(cand.controls);
            if (!best.feasible || cand.cost < best.cost)
                best = cand;
        }
        result.iteration_best_costs.push_back(best.feasible ? best.cost
                                                            : std::numeric_limits<double>::infinity());
        if (ranking.empty())
            continue; // nothing feasible this round; resample from the same distribution
        std::sort(ranking.begin(), ranking.end());
        const int elite_n =
            std::min<int>(static_cast<int>(ranking.size()),
                          std::max(1, static_cast<int>(std::lround(cfg.elite_frac * cfg.candidate_count))));
        for (int k = 0; k < h; ++k) {
            double mv = 0.0, mw = 0.0;
            for (int e = 0; e < elite_n; ++e) {
                mv += kept[ranking[e].second][k].v;
                mw += kept[ranking[e].second][k].omega;
            }
            mv /= elite_n;
            mw /= elite_n;
            double sv = 0.0, sw = 0.0;
            for (int e = 0; e < elite_n; ++e) {
                sv += (kept[ranking[e].second][k].v - mv) * (kept[ranking[e].second][k].v - mv);
                sw += (kept[ranking[e].second][k].omega - mw) * (kept[ranking[e].second][k].omega - mw);
            }
            mean_v[k] = mv;
            mean_w[k] = mw;
            std_v[k] = std::max(std::sqrt(sv / elite_n), std_v_floor);
            std_w[k] = std::max(std::sqrt(sw / elite_n), std_w_floor);
        }
    }

    if (!best.feasible)
        throw NoFeasiblePlan("all sampled candidate rollouts violate the safety distance");

    result.controls = std::move(best.controls);
    result.states = std::move(best.states);
    result.cost = best.cost;
    result.feasible = true;
    result.predicted_rates.assign(h, 0.0);
    if (radio != nullptr)
        for (int k = 0; k < h; ++k)
            result.predicted_rates[k] = step_reward_bps(result.states[k + 1], *radio, radio->budget);
    return result;
}

// ---------------------------------------------------------------------------
// Closed-loop episodes
// ---------------------------------------------------------------------------

enum class RepVariant { rep, nfc, ffc, nfc_planar };

inline std::string variant_name(RepVariant v) {
    switch (v) {
    case RepVariant::rep:
        return "REP";
    case RepVariant::nfc:
        return "NFC";
    case RepVariant::ffc:
        return "FFC";
    default:
        return "NFC-Planar";
    }
}

struct TraceRow {
    double t = 0.0;
    RobotState state;
    ControlInput u;
    double rate_bps = 0.0;
    double clearance_m = 0.0;
};

struct EpisodeTrace {
    RepVariant variant = RepVariant::rep;
    std::uint64_t seed = 0;
    std::vector<TraceRow> rows;
    bool reached_goal = false;
    double duration_s = 0.0;
    double mean_rate_bps = 0.0;
    double min_clearance_m = std::numeric_limits<double>::infinity();
    double min_array_distance_m = std::numeric_limits<double>::infinity();
};

struct RepEpisodeSetup {
    RobotState start;
    World world;
    RepConfig cfg;       // REP weights; baselines run with radio_weight = 0
    LinkEnv nfc_env;     // 640-element near-field environment (planning + NFC/REP realized rate)
    LinkEnv ffc_env;     // far-field baseline array, planar beamforming
    double time_limit_s = 60.0;
};

inline LinkEnv realized_env_for(const RepEpisodeSetup& setup, RepVariant v) {
    switch (v) {
    case RepVariant::ffc:
        return setup.ffc_env;
    case RepVariant::nfc_planar: {
        LinkEnv env = setup.nfc_env;
        env.beam_model = BeamModel::planar;
        return env;
    }
    default:
        return setup.nfc_env; // REP and NFC both get matched near-field focusing
    }
}

// Closed-loop receding-horizon episode: plan, execute the first control,
// advance time. The variant decides the beamforming model used for the
// realized rate; the channel the beam acts on is always the true
// spherical-wave one.
inline EpisodeTrace run_episode(const RepEpisodeSetup& setup, RepVariant variant, std::uint64_t seed) {
    EpisodeTrace trace;
    trace.variant = variant;
    trace.seed = seed;
    RepConfig cfg = setup.cfg;
    if (variant != RepVariant::rep)
        cfg.radio_weight = 0.0;
    const LinkEnv realized = realized_env_for(setup, variant);
    const LinkEnv& planning = setup.nfc_env;

    RobotState state = setup.start;
    double t = 0.0;
    const int max_ticks = static_cast<int>(std::ceil(setup.time_limit_s / cfg.dt));
    for (int tick = 0; tick < max_ticks; ++tick) {
        if (distance(state.position, cfg.goal) <= cfg.goal_tolerance) {
            trace.reached_goal = true;
            break;
        }
        cfg.rng_seed = mix_seed(seed, static_cast<std::uint64_t>(tick));
        ControlInput u;
        try {
            u = plan(state, setup.world, cfg, cfg.radio_weight > 0.0 ? &planning : nullptr, t).controls.front();
        } catch (const NoFeasiblePlan&) {
            // stop-in-place fallback; it must itself be safe over the horizon
            RobotState probe = state;
            for (int k = 0; k < cfg.horizon; ++k) {
                probe = step_dynamics(probe, {0.0, 0.0}, cfg.dt);
                if (!planning_clearance_at_least(probe, setup.world, t + (k + 1) * cfg.dt, cfg.safety_distance))
                    throw;
            }
            u = {0.0, 0.0};
        }
        TraceRow row;
        row.t = t;
        row.state = state;
        row.u = u;
        row.rate_bps = realized_rate_bps(realized, state.position);
        row.clearance_m = clearance(state, setup.world, t);
        trace.rows.push_back(row);
        state = step_dynamics(state, u, cfg.dt);
        t += cfg.dt;
    }
    if (!trace.reached_goal && distance(state.position, cfg.goal) <= cfg.goal_tolerance)
        trace.reached_goal = true;
    trace.duration_s = t;

    double rate_sum = 0.0;
    for (const auto& row : trace.rows) {
        rate_sum += row.rate_bps;
        trace.min_clearance_m = std::min(trace.min_clearance_m, row.clearance_m);
        trace.min_array_distance_m =
            std::min(trace.min_array_distance_m, distance(row.state.position, setup.nfc_env.geom.center));
    }
    trace.mean_rate_bps = trace.rows.empty() ? 0.0 : rate_sum / static_cast<double>(trace.rows.size());
    return trace;
}

} // namespace neei
