#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "neei/errors.hpp"
#include "neei/geometry.hpp"
#include "neei/rng.hpp"

namespace neei {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kHeatmapFloorDb = -999.0;    // sentinel for -inf cells

inline double watts_from_dbm(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double dbm_from_watts(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_from_linear(double g) { return 10.0 * std::log10(g); }
inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

// Uniform linear array. Element n sits at center + (n - (N-1)/2) * spacing * axis.
struct ArrayGeometry {
    int num_elements = 1;
    double carrier_freq_hz = 30e9;
    double element_spacing_m = 0.0; // 0 -> lambda/2
    Vec2 center{0.0, 0.0};
    Vec2 axis{0.0, 1.0};

    double wavelength() const { return kSpeedOfLight / carrier_freq_hz; }
    double spacing() const { return element_spacing_m > 0.0 ? element_spacing_m : 0.5 * wavelength(); }
    double aperture() const { return (num_elements - 1) * spacing(); }

    void validate() const {
        if (num_elements < 1)
            throw ValidationError("array needs num_elements >= 1");
        if (carrier_freq_hz <= 0.0)
            throw ValidationError("carrier_freq_hz must be positive");
        if (element_spacing_m < 0.0)
            throw ValidationError("element_spacing_m must be positive (or 0 for lambda/2)");
        if (std::fabs(axis.norm() - 1.0) > 1e-12)
            throw ValidationError("array axis must be a unit vector");
    }

    Vec2 element_position(int n) const {
        const double off = (n - 0.5 * (num_elements - 1)) * spacing();
        return center + axis * off;
    }
};

inline std::vector<Vec2> element_positions(const ArrayGeometry& geom) {
    geom.validate();
    std::vector<Vec2> out;
    out.reserve(geom.num_elements);
    for (int n = 0; n < geom.num_elements; ++n)
        out.push_back(geom.element_position(n));
    return out;
}

// boundary between radiative near field and far field, 2 D^2 / lambda
inline double rayleigh_distance(const ArrayGeometry& geom) {
    const double d = geom.aperture();
    return 2.0 * d * d / geom.wavelength();
}

struct PathlossModel {
    double reference_loss = 0.0; // linear power gain at 1 m (beta_0); 0 -> free space (lambda/4pi)^2
    double exponent = 2.0;       // alpha

    double resolved_reference(double wavelength) const {
        if (reference_loss > 0.0)
            return reference_loss;
        const double r = wavelength / (4.0 * M_PI);
        return r * r;
    }

    void validate() const {
        if (reference_loss < 0.0)
            throw ValidationError("pathloss reference_loss must be positive (or 0 for free-space default)");
        if (exponent < 0.0)
            throw ValidationError("pathloss exponent must be >= 0");
    }
};

inline double pathloss(const PathlossModel& pl, double dist_m, double wavelength) {
    return pl.resolved_reference(wavelength) * std::pow(dist_m, -pl.exponent);
}

struct ChannelVector {
    std::vector<std::complex<double>> gains;
    std::uint64_t geometry_id = 0;

    std::size_t size() const { return gains.size(); }
    double norm_sq() const {
        double s = 0.0;
        for (const auto& g : gains)
            s += std::norm(g);
        return s;
    }
};

struct BeamVector {
    std::vector<std::complex<double>> weights;
    std::size_t size() const { return weights.size(); }
};

struct LinkBudget {
    double tx_power_w = 0.1;
    double noise_power_w = 1e-11;
    double bandwidth_hz = 200e3;

    void validate() const {
        if (tx_power_w <= 0.0 || noise_power_w <= 0.0 || bandwidth_hz <= 0.0)
            throw ValidationError("link budget fields must be strictly positive");
    }
};

struct NlosParams {
    double rician_k = std::numeric_limits<double>::infinity(); // LoS/NLoS power ratio; +inf = LoS only
    std::complex<double> nlos_mean{0.0, 0.0};
    double nlos_std = 1.0;

    void validate() const {
        if (rician_k < 0.0)
            throw ValidationError("rician_k must be >= 0");
        if (nlos_std < 0.0)
            throw ValidationError("nlos_std must be >= 0");
        if (!std::isinf(rician_k) && std::norm(nlos_mean) + nlos_std * nlos_std <= 0.0)
            throw ValidationError("NLoS component has zero power but rician_k is finite");
    }
};

inline std::uint64_t geometry_fingerprint(const ArrayGeometry& g) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto mixd = [&h](double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        __builtin_memcpy(&bits, &v, sizeof(bits));
        h = (h ^ bits) * 0x100000001b3ULL;
    };
    h = (h ^ static_cast<std::uint64_t>(g.num_elements)) * 0x100000001b3ULL;
    mixd(g.carrier_freq_hz);
    mixd(g.spacing());
    mixd(g.center.x);
    mixd(g.center.y);
    mixd(g.axis.x);
    mixd(g.axis.y);
    return h;
}

enum class PathlossRef {
    per_element, // each element uses its own distance (spherical-wave magnitudes)
    array_center // all elements share the center distance (phase-only ablation)
};

// Spherical-wave LoS channel: h_n = sqrt(pl(d_n)) * exp(-j 2 pi d_n / lambda)
// with the exact per-element distance d_n = |target - s_n|.
inline ChannelVector los_channel_near(const ArrayGeometry& geom, Vec2 target, const PathlossModel& pl,
                                      PathlossRef ref = PathlossRef::per_element) {
    geom.validate();
    pl.validate();
    const double lambda = geom.wavelength();
    const double k = 2.0 * M_PI / lambda;
    const double center_dist = distance(target, geom.center);
    ChannelVector ch;
    ch.geometry_id = geometry_fingerprint(geom);
    ch.gains.reserve(geom.num_elements);
    for (int n = 0; n < geom.num_elements; ++n) {
        const double d = distance(target, geom.element_position(n));
        if (d < 1e-9)
            throw TargetOnElement("channel target coincides with array element " + std::to_string(n));
        const double mag_d = (ref == PathlossRef::per_element) ? d : center_dist;
        const double amp = std::sqrt(pathloss(pl, mag_d, lambda));
        ch.gains.push_back(std::polar(amp, -k * d));
    }
    return ch;
}

// Planar-wave approximation: common magnitude sqrt(pl(d)) with d = |target - center|,
// phases from d_n ~ d - (n - (N-1)/2) * spacing * cos(psi).
inline ChannelVector los_channel_far(const ArrayGeometry& geom, Vec2 target, const PathlossModel& pl) {
    geom.validate();
    pl.validate();
    const double lambda = geom.wavelength();
    const double k = 2.0 * M_PI / lambda;
    const Vec2 rel = target - geom.center;
    const double d = rel.norm();
    if (d < 1e-9)
        throw TargetOnElement("far-field channel target coincides with array center");
    const double cos_psi = rel.dot(geom.axis) / d;
    const double amp = std::sqrt(pathloss(pl, d, lambda));
    ChannelVector ch;
    ch.geometry_id = geometry_fingerprint(geom);
    ch.gains.reserve(geom.num_elements);
    for (int n = 0; n < geom.num_elements; ++n) {
        const double dn = d - (n - 0.5 * (geom.num_elements - 1)) * geom.spacing() * cos_psi;
        ch.gains.push_back(std::polar(amp, -k * dn));
    }
    return ch;
}

// Rician mixing: h' = sqrt(K/(K+1)) h + sqrt(1/(K+1)) g, with the NLoS draw g
// scaled per element so that E|g_n|^2 = |h_n|^2 (expected power preserved).
inline ChannelVector apply_nlos(const ChannelVector& ch, const NlosParams& params, std::uint64_t rng_seed) {
    params.validate();
    if (std::isinf(params.rician_k))
        return ch;
    const double k = params.rician_k;
    const double los_scale = std::sqrt(k / (k + 1.0));
    const double nlos_scale = std::sqrt(1.0 / (k + 1.0));
    const double unit_norm = std::sqrt(std::norm(params.nlos_mean) + params.nlos_std * params.nlos_std);
    Rng rng(mix_seed(rng_seed, 0x4e4c6f53ULL));
    ChannelVector out;
    out.geometry_id = ch.geometry_id;
    out.gains.reserve(ch.size());
    for (const auto& h : ch.gains) {
        const std::complex<double> unit = (params.nlos_mean + params.nlos_std * rng.cgaussian()) / unit_norm;
        out.gains.push_back(los_scale * h + nlos_scale * std::abs(h) * unit);
    }
    return out;
}

// Matched beam w = conj(h)/|h|; maximizes |h^T w|^2 over unit-norm beams.
inline BeamVector mrt_beam(const ChannelVector& ch) {
    const double nrm = std::sqrt(ch.norm_sq());
    if (!(nrm > 0.0))
        throw ZeroChannel("cannot form matched beam for all-zero channel");
    BeamVector beam;
    beam.weights.reserve(ch.size());
    for (const auto& h : ch.gains)
        beam.weights.push_back(std::conj(h) / nrm);
    return beam;
}

// Effective linear power gain |h^T w|^2 of a beam over a channel.
inline double beam_gain(const ChannelVector& ch, const BeamVector& beam) {
    if (ch.size() != beam.size())
        throw DimensionMismatch("channel has " + std::to_string(ch.size()) + " elements, beam has " +
                                std::to_string(beam.size()));
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < ch.size(); ++n)
        acc += ch.gains[n] * beam.weights[n];
    return std::norm(acc);
}

inline double snr(double gain, const LinkBudget& budget) {
    budget.validate();
    return budget.tx_power_w * gain / budget.noise_power_w;
}

inline double rate_bps(const LinkBudget& budget, double snr_linear) {
    budget.validate();
    return budget.bandwidth_hz * std::log2(1.0 + snr_linear);
}

struct Interferer {
    double gain = 0.0;
    double power_w = 0.0;
};

inline double sinr(double desired_gain, double desired_power_w, const std::vector<Interferer>& interferers,
                   double noise_w) {
    double denom = noise_w;
    for (const auto& it : interferers)
        denom += it.power_w * it.gain;
    return desired_power_w * desired_gain / denom;
}

// Row-major dB grid; cell (ix, iy) center is (x0 + ix*dx, y0 + iy*dy).
struct Heatmap {
    double x0 = 0.0, y0 = 0.0, dx = 0.0, dy = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> values_db; // ny rows of nx

    double at(int ix, int iy) const { return values_db[static_cast<std::size_t>(iy) * nx + ix]; }
    Vec2 cell_center(int ix, int iy) const { return {x0 + ix * dx, y0 + iy * dy}; }
};

inline Heatmap gain_heatmap(const ArrayGeometry& geom, const BeamVector& beam, const Rect& region,
                            double resolution_m, const PathlossModel& pl) {
    region.validate();
    if (!(resolution_m > 0.0))
        throw ValidationError("heatmap resolution must be positive");
    Heatmap hm;
    hm.nx = std::max(1, static_cast<int>(std::ceil((region.xmax - region.xmin) / resolution_m)));
    hm.ny = std::max(1, static_cast<int>(std::ceil((region.ymax - region.ymin) / resolution_m)));
    hm.dx = hm.dy = resolution_m;
    hm.x0 = region.xmin + 0.5 * resolution_m;
    hm.y0 = region.ymin + 0.5 * resolution_m;
    hm.values_db.resize(static_cast<std::size_t>(hm.nx) * hm.ny, kHeatmapFloorDb);
    for (int iy = 0; iy < hm.ny; ++iy) {
        for (int ix = 0; ix < hm.nx; ++ix) {
            double db = kHeatmapFloorDb;
            try {
                const double g = beam_gain(los_channel_near(geom, hm.cell_center(ix, iy), pl), beam);
                if (g > 0.0 && std::isfinite(g))
                    db = db_from_linear(g);
            } catch (const TargetOnElement&) {
                // cell sits on the array itself; keep the floor sentinel
            }
            hm.values_db[static_cast<std::size_t>(iy) * hm.nx + ix] = db;
        }
    }
    return hm;
}

} // namespace neei
