#pragma once

#include <cmath>
#include <string>

#include "neei/channel.hpp"

namespace neei {

enum class BeamModel {
    near_field, // matched spherical-wave beam (focusing)
    planar      // beam designed on the planar-wave approximation (steering)
};

inline std::string to_string(BeamModel m) { return m == BeamModel::near_field ? "near" : "planar"; }

// One radio configuration: an array, a pathloss law, a budget and the channel
// model its beamformer is designed on. The realized gain always evaluates the
// designed beam against the true spherical-wave channel.
struct LinkEnv {
    ArrayGeometry geom;
    PathlossModel pathloss;
    LinkBudget budget;
    BeamModel beam_model = BeamModel::near_field;

    void validate() const {
        geom.validate();
        pathloss.validate();
        budget.validate();
    }
};

// |h|^2 of the true near-field channel (the matched-beam gain), computed
// without trigonometry; hot path of the planner reward.
inline double focus_gain(const ArrayGeometry& geom, const PathlossModel& pl, Vec2 target) {
    const double lambda = geom.wavelength();
    const double beta0 = pl.resolved_reference(lambda);
    const double alpha = pl.exponent;
    const int n_el = geom.num_elements;
    const Vec2 step = geom.axis * geom.spacing();
    Vec2 rel = target - (geom.center + geom.axis * (-0.5 * (n_el - 1) * geom.spacing()));
    double acc = 0.0;
    if (alpha == 2.0) {
        for (int n = 0; n < n_el; ++n) {
            const double d2 = rel.norm_sq();
            if (d2 < 1e-18)
                throw TargetOnElement("gain target coincides with array element");
            acc += 1.0 / d2;
            rel = rel - step;
        }
    } else {
        for (int n = 0; n < n_el; ++n) {
            const double d2 = rel.norm_sq();
            if (d2 < 1e-18)
                throw TargetOnElement("gain target coincides with array element");
            acc += std::pow(d2, -0.5 * alpha);
            rel = rel - step;
        }
    }
    return beta0 * acc;
}

// Beam designed on env.beam_model at `target`, applied to the true
// spherical-wave channel at the same point.
inline double realized_gain(const LinkEnv& env, Vec2 target) {
    const ChannelVector truth = los_channel_near(env.geom, target, env.pathloss);
    if (env.beam_model == BeamModel::near_field)
        return truth.norm_sq(); // matched beam achieves the Cauchy-Schwarz bound
    const ChannelVector model = los_channel_far(env.geom, target, env.pathloss);
    return beam_gain(truth, mrt_beam(model));
}

inline double realized_rate_bps(const LinkEnv& env, Vec2 target) {
    return rate_bps(env.budget, snr(realized_gain(env, target), env.budget));
}

// Transmit power needed to hit an SINR target against noise only.
inline double required_power_w(const LinkEnv& env, Vec2 target, double sinr_target_linear) {
    const double g = realized_gain(env, target);
    if (!(g > 0.0))
        throw ZeroGain("link gain is zero; required power undefined");
    return sinr_target_linear * env.budget.noise_power_w / g;
}

// Cross gain |h_src^T w|^2 of source `src` into the matched combiner of `dst`
// (both on the same array); the interference term of the uplink SINR.
inline double cross_gain(const LinkEnv& env, Vec2 dst, Vec2 src) {
    const ChannelVector h_dst = los_channel_near(env.geom, dst, env.pathloss);
    const ChannelVector h_src = los_channel_near(env.geom, src, env.pathloss);
    return beam_gain(h_src, mrt_beam(h_dst));
}

} // namespace neei
