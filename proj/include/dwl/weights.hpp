#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dwl/depth.hpp"
#include "dwl/numerics.hpp"

namespace dwl {

enum class WeightScheme { h_function, raf };
enum class RafKind { identity, hellinger };

/// Tuning constants of the depth-ratio weight function.
///   a      - steepness of the H decay exp(-a * delta^2)
///   c      - hard truncation: H is zero for residuals above c
///   alpha  - central full-weight region: weight 1 whenever the model depth
///            exceeds alpha/2, i.e. alpha is the fraction of the maximal
///            normal depth 0.5; alpha = 0 disables the region
///   depth_floor - lower guard on the model depth in the residual
///            denominator, so gross outliers get a huge finite residual and
///            land past the truncation point instead of overflowing
struct WeightConfig {
    double a = 0.05;
    double c = 200.0;
    double alpha = 0.5;
    double depth_floor = 1e-12;
    WeightScheme scheme = WeightScheme::h_function;
    RafKind raf_kind = RafKind::hellinger;

    void validate() const {
        if (!(a > 0.0)) throw std::domain_error("WeightConfig: a must be positive");
        if (!(c > 0.0)) throw std::domain_error("WeightConfig: c must be positive");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::domain_error("WeightConfig: alpha must lie in [0,1]");
        if (!(depth_floor > 0.0)) throw std::domain_error("WeightConfig: depth_floor must be positive");
    }
};

/// Depth-ratio Pearson residual: sample depth over floored model depth,
/// minus one. Zero when the depths agree, -1 when the sample depth is zero.
inline double pearson_residual(double sample_depth, double model_depth, double depth_floor) {
    return sample_depth / std::max(model_depth, depth_floor) - 1.0;
}

/// H weight: exp(-a * delta^2) up to the truncation point c, zero above it.
/// Maximum 1 at delta = 0 and flat there to first order.
inline double weight_h(double delta, double a, double c) {
    if (delta > c) return 0.0;
    return std::exp(-a * delta * delta);
}

/// Residual adjustment function weight (A(delta) + 1) / (delta + 1),
/// clipped to [0,1]. The identity RAF A(delta) = delta gives weight 1
/// everywhere; at delta = -1 the value is the one-sided limit (1 for the
/// identity, 0 for hellinger, whose unclipped ratio diverges to -inf).
inline double weight_raf(double delta, RafKind kind) {
    switch (kind) {
        case RafKind::identity:
            return 1.0;
        case RafKind::hellinger: {
            const double s = 1.0 + delta;
            if (s <= 0.0) return 0.0;
            const double w = (2.0 * std::sqrt(s) - 1.0) / s;
            return std::clamp(w, 0.0, 1.0);
        }
    }
    return 1.0;
}

/// Weight of one observation under the current model parameters: 1 inside
/// the central full-weight region, otherwise the configured function of the
/// depth-ratio residual. sample_depth is the point's precomputed
/// finite-sample depth against the full dataset.
inline double observation_weight(const Eigen::VectorXd& x, double sample_depth,
                                 const ModelParams& theta, const WeightConfig& config) {
    const double md = model_depth_normal(x, theta).value;
    if (config.alpha > 0.0 && md > 0.5 * config.alpha) return 1.0;
    const double delta = pearson_residual(sample_depth, md, config.depth_floor);
    if (config.scheme == WeightScheme::h_function) return weight_h(delta, config.a, config.c);
    return weight_raf(delta, config.raf_kind);
}

} // namespace dwl
