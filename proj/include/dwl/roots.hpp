#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dwl/depth.hpp"
#include "dwl/estimator.hpp"
#include "dwl/rng.hpp"

namespace dwl {

/// Subsample-seeded multi-start configuration. Every start s draws from its
/// own stream mix_seed(seed, s), so results do not depend on evaluation
/// order; degenerate subsamples are redrawn from the same stream up to
/// max_redraws times before the start counts as failed.
struct RootSearchConfig {
    int n_subsamples = 500;
    int subsample_size = 6;
    std::uint64_t seed = 0;
    double dedup_tol = 1e-3;
    int max_redraws = 10;

    void validate(Eigen::Index dim) const {
        if (n_subsamples < 0) throw std::domain_error("RootSearchConfig: n_subsamples negative");
        if (subsample_size < dim + 1)
            throw std::domain_error("RootSearchConfig: subsample_size must be at least dim+1");
        if (!(dedup_tol > 0.0)) throw std::domain_error("RootSearchConfig: dedup_tol must be positive");
    }
};

/// Deduplicated estimating-equation roots with their basin sizes.
/// basin_counts[i] is the number of starts whose converged fit merged into
/// roots[i]; n_failed counts starts that never produced a converged fit.
struct RootSet {
    std::vector<FitResult> roots;
    std::vector<int> basin_counts;
    int n_failed = 0;
};

/// Iteration controls forwarded to each wlee_fit start. n_dirs <= 0 keeps
/// the approximate-depth default of 1000 * dim (dimensions above 2 only).
struct FitOptions {
    double tol = 1e-6;
    int max_iter = 500;
    int n_dirs = 0;
};

namespace detail {

inline std::vector<int> subsample_indices(Rng& rng, int n, int k) {
    // partial Fisher-Yates over an index vector
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < k; ++j) {
        const int r = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - j)));
        std::swap(idx[j], idx[r]);
    }
    idx.resize(k);
    return idx;
}

} // namespace detail

/// The first subsample drawn by every start's stream, in start order.
/// Sampling is without replacement within each index set and fully
/// determined by config.seed.
inline std::vector<std::vector<int>> draw_subsamples(int n, const RootSearchConfig& config) {
    if (config.subsample_size > n)
        throw std::domain_error("draw_subsamples: subsample_size exceeds sample size");
    if (config.n_subsamples < 0)
        throw std::domain_error("draw_subsamples: n_subsamples negative");
    std::vector<std::vector<int>> sets;
    sets.reserve(config.n_subsamples);
    for (int s = 0; s < config.n_subsamples; ++s) {
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(s)));
        sets.push_back(detail::subsample_indices(rng, n, config.subsample_size));
    }
    return sets;
}

/// Greedy dedup of converged fits in arrival order. A fit joins the first
/// cluster whose anchor is within dedup_tol under the relative metric on
/// (mu, sigma); each cluster is represented by its largest-weight_sum
/// member. Merging repeats on the representatives until stable, and the
/// result is ordered by descending weight_sum (earlier arrival wins ties).
inline RootSet dedup_roots(const std::vector<FitResult>& fits, double dedup_tol) {
    struct Entry {
        FitResult fit;
        int count = 1;
        std::size_t arrival = 0;
    };

    auto close = [dedup_tol](const ModelParams& a, const ModelParams& b) {
        const auto [dmu, dsigma] = relative_change(a, b);
        return dmu < dedup_tol && dsigma < dedup_tol;
    };

    std::vector<Entry> entries;
    entries.reserve(fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i) entries.push_back({fits[i], 1, i});

    // one greedy pass: anchor = first member, representative = best member
    auto pass = [&](const std::vector<Entry>& input) {
        struct Cluster {
            ModelParams anchor;
            Entry rep;
            int count = 0;
        };
        std::vector<Cluster> clusters;
        for (const auto& e : input) {
            bool merged = false;
            for (auto& cl : clusters) {
                if (close(cl.anchor, e.fit.theta)) {
                    cl.count += e.count;
                    if (e.fit.weight_sum > cl.rep.fit.weight_sum) cl.rep = e;
                    merged = true;
                    break;
                }
            }
            if (!merged) clusters.push_back({e.fit.theta, e, e.count});
        }
        std::vector<Entry> out;
        out.reserve(clusters.size());
        for (auto& cl : clusters) {
            cl.rep.count = cl.count;
            out.push_back(std::move(cl.rep));
        }
        return out;
    };

    std::size_t before = entries.size();
    for (;;) {
        entries = pass(entries);
        if (entries.size() == before) break;
        before = entries.size();
    }

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.fit.weight_sum != b.fit.weight_sum) return a.fit.weight_sum > b.fit.weight_sum;
        return a.arrival < b.arrival;
    });

    RootSet set;
    for (auto& e : entries) {
        set.roots.push_back(std::move(e.fit));
        set.basin_counts.push_back(e.count);
    }
    return set;
}

/// Multi-start root search: each start fits from the MLE of its subsample,
/// converged fits are deduplicated into a RootSet ordered by descending
/// weight_sum. Finite-sample depths are computed once and shared by all
/// starts. Starts whose subsample stays degenerate through the redraw
/// budget, or whose fit does not converge, count into n_failed.
inline RootSet find_roots(const Eigen::MatrixXd& data, const WeightConfig& wconfig,
                          const RootSearchConfig& rconfig, const FitOptions& options = {}) {
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    wconfig.validate();
    rconfig.validate(p);
    if (rconfig.subsample_size > n)
        throw std::domain_error("find_roots: subsample_size exceeds sample size");

    const Eigen::VectorXd depths = sample_depths(data, options.n_dirs, rconfig.seed);

    std::vector<FitResult> converged;
    int n_failed = 0;
    for (int s = 0; s < rconfig.n_subsamples; ++s) {
        Rng rng(mix_seed(rconfig.seed, static_cast<std::uint64_t>(s)));
        bool have_start = false;
        ModelParams theta0;
        for (int attempt = 0; attempt <= rconfig.max_redraws && !have_start; ++attempt) {
            const std::vector<int> idx =
                detail::subsample_indices(rng, static_cast<int>(n), rconfig.subsample_size);
            Eigen::MatrixXd subsample(idx.size(), p);
            for (std::size_t r = 0; r < idx.size(); ++r) subsample.row(r) = data.row(idx[r]);
            try {
                theta0 = mle(subsample);
                have_start = true;
            } catch (const DegenerateSampleError&) {
                // collinear subsample, redraw
            }
        }
        if (!have_start) {
            ++n_failed;
            continue;
        }
        FitResult fit = wlee_fit(data, theta0, wconfig, depths, options.tol, options.max_iter);
        if (fit.converged) converged.push_back(std::move(fit));
        else ++n_failed;
    }

    RootSet set = dedup_roots(converged, rconfig.dedup_tol);
    set.n_failed = n_failed;
    return set;
}

} // namespace dwl
