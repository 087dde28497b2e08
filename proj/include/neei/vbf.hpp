#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "neei/errors.hpp"
#include "neei/link.hpp"
#include "neei/world.hpp"

namespace neei {

struct CapturePose {
    Vec2 position{0.0, 0.0};
    double heading = 0.0;
};

struct Frame {
    int id = 0;
    Vec2 position{0.0, 0.0};
    double heading = 0.0;
    double payload_bits = 13840000.0; // 1.73 MBytes
    double score = 0.0;               // view contribution sigma_k
    double slot_duration_s = 1.0;
};

// Novelty proxy standing in for the rendering-loss contribution of a frame:
// 0 at a training pose, approaching 1 for poses far (in position or heading)
// from every training pose.
inline double frame_score_proxy(const CapturePose& pose, const std::vector<CapturePose>& training_poses,
                                double length_scale_m, double angle_scale_rad) {
    if (training_poses.empty())
        throw ValidationError("frame_score_proxy needs a nonempty training set");
    if (!(length_scale_m > 0.0) || !(angle_scale_rad > 0.0))
        throw ValidationError("frame_score_proxy scales must be positive");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& tp : training_poses) {
        const double d = distance(pose.position, tp.position) / length_scale_m +
                         angle_dist(pose.heading, tp.heading) / angle_scale_rad;
        best = std::min(best, d);
    }
    return 1.0 - std::exp(-best);
}

// Minimum uplink power delivering the frame payload within its slot:
// p_min = (sigma^2 / g) * (2^(S / (B*T)) - 1), with g the combining gain of
// the environment's beam model against the true near-field channel.
inline double min_power_w(const Frame& frame, const LinkEnv& env) {
    if (!(frame.payload_bits > 0.0) || !(frame.slot_duration_s > 0.0))
        throw ValidationError("frame payload and slot duration must be positive");
    const double g = realized_gain(env, frame.position);
    if (!(g > 0.0))
        throw ZeroGain("uplink gain is zero for frame " + std::to_string(frame.id));
    const double spectral = frame.payload_bits / (env.budget.bandwidth_hz * frame.slot_duration_s);
    return env.budget.noise_power_w / g * (std::exp2(spectral) - 1.0);
}

enum class BudgetMode { total_power, per_frame_cap };

struct VbfProblem {
    std::vector<Frame> frames;
    LinkEnv link;
    BudgetMode mode = BudgetMode::total_power;
    double power_budget_w = 0.0; // P_tot (total_power) or P_max (per_frame_cap)
};

struct VbfSolution {
    std::vector<int> selected_ids; // ascending
    std::vector<double> powers_w;  // parallel to selected_ids, each = p_min
    double total_score = 0.0;
    double total_power_w = 0.0;
};

namespace detail {

struct Item {
    int id;
    double score;
    double power;
};

inline std::vector<Item> make_items(const VbfProblem& problem) {
    std::vector<Item> items;
    items.reserve(problem.frames.size());
    for (const auto& f : problem.frames)
        items.push_back({f.id, f.score, min_power_w(f, problem.link)});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.id < b.id; });
    return items;
}

inline VbfSolution solution_from(const std::vector<Item>& items, const std::vector<char>& chosen) {
    VbfSolution sol;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!chosen[i])
            continue;
        sol.selected_ids.push_back(items[i].id);
        sol.powers_w.push_back(items[i].power);
        sol.total_score += items[i].score;
        sol.total_power_w += items[i].power;
    }
    return sol;
}

// true if mask a is lexicographically smaller than b as an ascending id set
inline bool idset_less(const std::vector<char>& a, const std::vector<char>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i])
            return a[i] > b[i]; // the set containing the earlier id sorts first
    return false;
}

} // namespace detail

// Exhaustive subset enumeration (frames take exactly p_min). Ties resolve to
// lower total power, then to the lexicographically smallest id set.
inline VbfSolution solve_exact(const VbfProblem& problem) {
    const std::size_t n = problem.frames.size();
    if (n == 0)
        throw ValidationError("vbf problem has no frames");
    if (n > 24)
        throw TooManyFramesForExact("exact solver is limited to 24 frames, got " + std::to_string(n));
    auto items = detail::make_items(problem);
    const bool cap_mode = problem.mode == BudgetMode::per_frame_cap;
    const double budget = cap_mode ? std::numeric_limits<double>::infinity() : problem.power_budget_w;
    if (cap_mode) {
        // a per-frame cap separates: drop frames over the cap, budget is unbounded
        std::erase_if(items, [&](const detail::Item& it) { return it.power > problem.power_budget_w * (1.0 + 1e-12); });
    }

    std::vector<double> suffix_score(items.size() + 1, 0.0);
    for (std::size_t i = items.size(); i-- > 0;)
        suffix_score[i] = suffix_score[i + 1] + std::max(0.0, items[i].score);

    std::vector<char> chosen(items.size(), 0), best_chosen(items.size(), 0);
    double best_score = 0.0, best_power = 0.0;
    bool have_best = false;

    const auto consider = [&](double score, double power) {
        if (!have_best || score > best_score + 1e-12 ||
            (std::fabs(score - best_score) <= 1e-12 &&
             (power < best_power - 1e-15 ||
              (std::fabs(power - best_power) <= 1e-15 && detail::idset_less(chosen, best_chosen))))) {
            best_score = score;
            best_power = power;
            best_chosen = chosen;
            have_best = true;
        }
    };

    const auto dfs = [&](auto&& self, std::size_t i, double score, double power) -> void {
        if (have_best && score + suffix_score[i] < best_score - 1e-12)
            return;
        if (i == items.size()) {
            consider(score, power);
            return;
        }
        if (power + items[i].power <= budget * (1.0 + 1e-12)) {
            chosen[i] = 1;
            self(self, i + 1, score + items[i].score, power + items[i].power);
            chosen[i] = 0;
        }
        self(self, i + 1, score, power);
    };
    dfs(dfs, 0, 0.0, 0.0);

    return detail::solution_from(items, best_chosen);
}

// Density greedy (score per watt) with one swap-improvement pass: the single
// best replace-one-and-refill move is applied if it raises the total score.
inline VbfSolution solve_greedy(const VbfProblem& problem) {
    if (problem.frames.empty())
        throw ValidationError("vbf problem has no frames");
    auto items = detail::make_items(problem);
    const bool cap_mode = problem.mode == BudgetMode::per_frame_cap;
    const double budget = cap_mode ? std::numeric_limits<double>::infinity() : problem.power_budget_w;
    if (cap_mode)
        std::erase_if(items, [&](const detail::Item& it) { return it.power > problem.power_budget_w * (1.0 + 1e-12); });

    double power_all = 0.0;
    for (const auto& it : items)
        power_all += it.power;
    const bool binds = power_all > budget;

    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double da = items[a].score / items[a].power, db = items[b].score / items[b].power;
        if (da != db)
            return da > db;
        return items[a].id < items[b].id;
    });

    const auto greedy_fill = [&](std::vector<char>& chosen, double& power) {
        for (std::size_t idx : order) {
            if (chosen[idx])
                continue;
            if (binds && items[idx].score <= 0.0)
                continue; // don't burn a binding budget on worthless frames
            if (power + items[idx].power <= budget * (1.0 + 1e-12)) {
                chosen[idx] = 1;
                power += items[idx].power;
            }
        }
    };

    std::vector<char> chosen(items.size(), 0);
    double power = 0.0;
    greedy_fill(chosen, power);
    double score = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (chosen[i])
            score += items[i].score;

    // one swap pass
    double best_gain = 1e-12;
    std::vector<char> best_swapped;
    for (std::size_t s = 0; s < items.size(); ++s) {
        if (!chosen[s])
            continue;
        for (std::size_t u = 0; u < items.size(); ++u) {
            if (chosen[u] || u == s)
                continue;
            if (power - items[s].power + items[u].power > budget * (1.0 + 1e-12))
                continue;
            std::vector<char> trial = chosen;
            trial[s] = 0;
            trial[u] = 1;
            double trial_power = power - items[s].power + items[u].power;
            std::vector<char> blocked = trial;
            blocked[s] = 1; // keep the removed frame out of the refill
            double refill_power = trial_power;
            greedy_fill(blocked, refill_power);
            blocked[s] = 0;
            double trial_score = 0.0;
            for (std::size_t i = 0; i < items.size(); ++i)
                if (blocked[i])
                    trial_score += items[i].score;
            if (trial_score - score > best_gain) {
                best_gain = trial_score - score;
                best_swapped = blocked;
            }
        }
    }
    if (!best_swapped.empty())
        chosen = best_swapped;

    return detail::solution_from(items, chosen);
}

// ---------------------------------------------------------------------------
// Episode-level comparison
// ---------------------------------------------------------------------------

enum class VbfVariant { vbf, nfc_throughput, ffc, nfc_planar };

inline std::string variant_name(VbfVariant v) {
    switch (v) {
    case VbfVariant::vbf:
        return "VBF";
    case VbfVariant::nfc_throughput:
        return "NFC-throughput";
    case VbfVariant::ffc:
        return "FFC";
    default:
        return "NFC-Planar";
    }
}

struct VbfFrameDecision {
    int id = 0;
    bool selected = false;
    double p_min_w = 0.0;
    double score = 0.0;
};

struct VbfReport {
    VbfVariant variant = VbfVariant::vbf;
    std::vector<VbfFrameDecision> decisions;
    double total_score = 0.0;
    double total_power_w = 0.0;
    double delivered_bits = 0.0;
    int frames_selected = 0;
};

// `env` must already reflect the variant (array + beam model); the variant
// switches the objective: VBF-style score maximization versus throughput
// maximization (delivered bits, scores ignored).
inline VbfReport run_vbf_episode(const std::vector<Frame>& frames, const LinkEnv& env, BudgetMode mode,
                                 double power_budget_w, VbfVariant variant) {
    VbfProblem problem{frames, env, mode, power_budget_w};
    VbfSolution sol;
    if (variant == VbfVariant::nfc_throughput) {
        auto items = detail::make_items(problem);
        std::vector<std::size_t> order(items.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> bits(items.size(), 0.0);
        for (const auto& f : frames)
            for (std::size_t i = 0; i < items.size(); ++i)
                if (items[i].id == f.id)
                    bits[i] = f.payload_bits;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double da = bits[a] / items[a].power, db = bits[b] / items[b].power;
            if (da != db)
                return da > db;
            return items[a].id < items[b].id;
        });
        const double budget = mode == BudgetMode::per_frame_cap ? std::numeric_limits<double>::infinity()
                                                                : power_budget_w;
        std::vector<char> chosen(items.size(), 0);
        double power = 0.0;
        for (std::size_t idx : order) {
            if (mode == BudgetMode::per_frame_cap && items[idx].power > power_budget_w * (1.0 + 1e-12))
                continue;
            if (power + items[idx].power <= budget * (1.0 + 1e-12)) {
                chosen[idx] = 1;
                power += items[idx].power;
            }
        }
        sol = detail::solution_from(items, chosen);
    } else {
        sol = frames.size() <= 24 ? solve_exact(problem) : solve_greedy(problem);
    }

    VbfReport report;
    report.variant = variant;
    auto items = detail::make_items(problem);
    for (const auto& it : items) {
        const bool sel = std::binary_search(sol.selected_ids.begin(), sol.selected_ids.end(), it.id);
        report.decisions.push_back({it.id, sel, it.power, it.score});
        if (sel) {
            report.total_score += it.score;
            report.total_power_w += it.power;
            ++report.frames_selected;
        }
    }
    for (const auto& f : frames)
        if (std::binary_search(sol.selected_ids.begin(), sol.selected_ids.end(), f.id))
            report.delivered_bits += f.payload_bits;
    return report;
}

// Evenly spaced capture poses along a waypoint polyline, heading tangent to it.
inline std::vector<CapturePose> poses_along_path(const std::vector<Vec2>& path, int count) {
    if (path.size() < 2 || count < 1)
        throw ValidationError("poses_along_path needs >= 2 waypoints and count >= 1");
    const double total = path_length(path);
    std::vector<CapturePose> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double s = count == 1 ? 0.0 : total * static_cast<double>(i) / (count - 1);
        const Vec2 p = path_point_at(path, s);
        const Vec2 q = path_point_at(path, std::min(total, s + 1e-3));
        const Vec2 d = (q - p).norm() > 1e-9 ? q - p : path.back() - path[path.size() - 2];
        out.push_back({p, std::atan2(d.y, d.x)});
    }
    return out;
}

} // namespace neei
