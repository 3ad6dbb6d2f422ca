#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "dwl/errors.hpp"
#include "dwl/numerics.hpp"
#include "dwl/weights.hpp"

namespace dwl {

/// Every weight fell to (numerically) zero; the step has no support.
class AllDownweightedError : public std::runtime_error {
public:
    explicit AllDownweightedError(double weight_sum)
        : std::runtime_error("weighted step lost all support: weight sum = " +
                             std::to_string(weight_sum)) {}
};

/// The reweighted covariance is no longer positive definite.
class DegenerateStepError : public std::runtime_error {
public:
    explicit DegenerateStepError(const std::string& what) : std::runtime_error(what) {}
};

enum class FitStatus { converged, max_iter_reached, all_downweighted, degenerate_step };

inline const char* to_string(FitStatus s) {
    switch (s) {
        case FitStatus::converged: return "converged";
        case FitStatus::max_iter_reached: return "max_iter_reached";
        case FitStatus::all_downweighted: return "all_downweighted";
        case FitStatus::degenerate_step: return "degenerate_step";
    }
    return "unknown";
}

/// One root candidate: terminal parameters, per-observation weights and
/// iteration diagnostics.
struct FitResult {
    ModelParams theta;
    Eigen::VectorXd weights;
    int iterations = 0;
    bool converged = false;
    FitStatus status = FitStatus::max_iter_reached;
    double weight_sum = 0.0;
    double weighted_loglik = 0.0;
};

/// Maximum likelihood estimate of the normal model: sample mean and
/// covariance with divisor n (the score-equation convention).
inline ModelParams mle(const Eigen::MatrixXd& data) {
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    if (n < p + 1)
        throw DegenerateSampleError("mle: need at least dim+1 observations, got " +
                                    std::to_string(n));
    ModelParams theta;
    theta.mu = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - theta.mu.transpose();
    theta.sigma = (centered.transpose() * centered) / static_cast<double>(n);
    try {
        SpdFactor check(theta.sigma);
        (void)check;
    } catch (const NotSpdError& e) {
        throw DegenerateSampleError(std::string("mle: sample covariance is singular (") +
                                    e.what() + ")");
    }
    return theta;
}

/// Relative parameter change between two fits, the convergence and
/// dedup metric: (||mu1 - mu2|| / (1 + ||mu1||),
///                ||sigma1 - sigma2||_F / (1 + ||sigma1||_F)).
inline std::pair<double, double> relative_change(const ModelParams& from, const ModelParams& to) {
    const double dmu = (to.mu - from.mu).norm() / (1.0 + from.mu.norm());
    const double dsigma = (to.sigma - from.sigma).norm() / (1.0 + from.sigma.norm());
    return {dmu, dsigma};
}

/// Observation weights at the given parameters. sample_depths is the cached
/// finite-sample depth of each data point (it does not depend on theta).
inline Eigen::VectorXd observation_weights(const Eigen::MatrixXd& data,
                                           const ModelParams& theta,
                                           const WeightConfig& config,
                                           const Eigen::VectorXd& sample_depths) {
    const Eigen::Index n = data.rows();
    if (sample_depths.size() != n)
        throw std::invalid_argument("observation_weights: depth cache size mismatch");
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i)
        w[i] = observation_weight(data.row(i).transpose(), sample_depths[i], theta, config);
    return w;
}

/// One reweighting iteration: weights at the current theta, then the exact
/// solution of the weighted normal score equations for those frozen weights
/// (weighted mean, weighted covariance about the updated mean, divisor
/// sum of weights).
inline std::pair<ModelParams, Eigen::VectorXd> wlee_step(const Eigen::MatrixXd& data,
                                                         const ModelParams& theta,
                                                         const WeightConfig& config,
                                                         const Eigen::VectorXd& sample_depths) {
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    Eigen::VectorXd w = observation_weights(data, theta, config, sample_depths);
    const double wsum = w.sum();
    if (wsum < static_cast<double>(n) * 1e-6) throw AllDownweightedError(wsum);

    ModelParams next;
    next.mu = (data.transpose() * w) / wsum;
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd centered = data.row(i).transpose() - next.mu;
        sigma.noalias() += w[i] * (centered * centered.transpose());
    }
    next.sigma = sigma / wsum;
    try {
        SpdFactor check(next.sigma);
        (void)check;
    } catch (const NotSpdError& e) {
        throw DegenerateStepError(std::string("wlee_step: reweighted covariance degenerate (") +
                                  e.what() + ")");
    }
    return {std::move(next), std::move(w)};
}

/// Weighted log-likelihood sum_i w_i log phi(x_i; theta).
inline double weighted_loglik(const Eigen::MatrixXd& data, const ModelParams& theta,
                              const Eigen::VectorXd& weights) {
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    const SpdFactor factor(theta.sigma);
    const double log_norm = -0.5 * (p * std::log(2.0 * M_PI) + factor.log_det());
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        total += weights[i] *
                 (log_norm - 0.5 * factor.mahalanobis_sq(data.row(i).transpose(), theta.mu));
    return total;
}

/// Iterate wlee_step from theta0 until the relative parameter change drops
/// below tol or max_iter is reached. Step failures (lost support, degenerate
/// covariance) come back as non-converged results tagged with the cause,
/// holding the last valid parameters.
inline FitResult wlee_fit(const Eigen::MatrixXd& data, const ModelParams& theta0,
                          const WeightConfig& config, const Eigen::VectorXd& sample_depths,
                          double tol = 1e-6, int max_iter = 500) {
    if (!(tol > 0.0)) throw std::domain_error("wlee_fit: tol must be positive");
    if (max_iter < 0) throw std::domain_error("wlee_fit: max_iter must be nonnegative");
    config.validate();

    FitResult result;
    result.theta = theta0;
    result.status = FitStatus::max_iter_reached;

    for (int it = 1; it <= max_iter; ++it) {
        ModelParams next;
        Eigen::VectorXd w;
        try {
            std::tie(next, w) = wlee_step(data, result.theta, config, sample_depths);
        } catch (const AllDownweightedError&) {
            result.status = FitStatus::all_downweighted;
            break;
        } catch (const DegenerateStepError&) {
            result.status = FitStatus::degenerate_step;
            break;
        }
        const auto [dmu, dsigma] = relative_change(result.theta, next);
        result.theta = std::move(next);
        result.weights = std::move(w);
        result.iterations = it;
        if (std::max(dmu, dsigma) < tol) {
            result.converged = true;
            result.status = FitStatus::converged;
            break;
        }
    }

    // report weights evaluated at the terminal parameters
    result.weights = observation_weights(data, result.theta, config, sample_depths);
    result.weight_sum = result.weights.sum();
    result.weighted_loglik = weighted_loglik(data, result.theta, result.weights);
    return result;
}

} // namespace dwl
