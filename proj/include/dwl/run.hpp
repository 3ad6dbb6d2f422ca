#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwl/dataset.hpp"
#include "dwl/io.hpp"
#include "dwl/roots.hpp"
#include "dwl/synthetic.hpp"
#include "dwl/weights.hpp"

namespace dwl {

/// One analysis run, assembled from the command line or directly in code.
struct RunConfig {
    std::string input;
    std::vector<std::string> columns; // names or 0-based indices; empty = all
    bool log_transform = false;

    double a = 0.05;
    double c = 200.0;
    double alpha = 0.5;
    std::string scheme = "h"; // h | raf
    std::string raf = "hellinger"; // identity | hellinger

    int subsamples = 500;
    int subsample_size = 6;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    int max_iter = 500;
    int n_dirs = 0; // 0 = automatic for approximate depth

    double ellipse_level = 0.95;

    std::string out_roots;
    std::string out_ellipses;
    std::string out_weights;

    std::string generate; // two-cluster | three-cluster; empty = load input
};

namespace detail {

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

inline WeightConfig make_weight_config(const RunConfig& config) {
    WeightConfig weights;
    weights.a = config.a;
    weights.c = config.c;
    weights.alpha = config.alpha;
    if (config.scheme == "h") {
        weights.scheme = WeightScheme::h_function;
    } else if (config.scheme == "raf") {
        weights.scheme = WeightScheme::raf;
    } else {
        throw std::invalid_argument("unknown scheme '" + config.scheme + "' (expected h or raf)");
    }
    if (config.raf == "identity") {
        weights.raf_kind = RafKind::identity;
    } else if (config.raf == "hellinger") {
        weights.raf_kind = RafKind::hellinger;
    } else {
        throw std::invalid_argument("unknown raf '" + config.raf +
                                    "' (expected identity or hellinger)");
    }
    weights.validate();
    return weights;
}

/// Execute a full run: optional synthetic-data generation, ingestion, root
/// search, and output files. Returns the process exit status: 0 when at
/// least one root is found (or generation-only runs), 2 when the search
/// comes back empty, 1 on input or configuration errors.
inline int run(const RunConfig& config, std::ostream& err = std::cerr) {
    try {
        if (!config.generate.empty()) {
            if (config.input.empty())
                throw std::invalid_argument("--generate needs --input as the destination path");
            write_csv(config.input, generate_dataset(config.generate, config.seed));
            err << "generated " << config.generate << " data at " << config.input << "\n";
            if (config.out_roots.empty() && config.out_ellipses.empty() &&
                config.out_weights.empty())
                return 0;
        }
        if (config.input.empty()) throw std::invalid_argument("no input file given");

        const CsvLoad load = load_csv(config.input, config.columns, config.log_transform);
        const Dataset& data = load.dataset;
        if (!load.skipped_rows.empty()) {
            err << "skipped " << load.skipped_rows.size() << " row(s) with missing values:";
            for (std::size_t line : load.skipped_rows) err << " " << line;
            err << "\n";
        }

        const WeightConfig weights = make_weight_config(config);
        RootSearchConfig search;
        search.n_subsamples = config.subsamples;
        search.subsample_size = config.subsample_size;
        search.seed = config.seed;
        search.validate(data.dim());
        FitOptions options;
        options.tol = config.tol;
        options.max_iter = config.max_iter;
        options.n_dirs = config.n_dirs;
        if (options.tol <= 0.0) throw std::invalid_argument("tol must be positive");
        if (options.max_iter < 1) throw std::invalid_argument("max-iter must be at least 1");
        if (!(config.ellipse_level > 0.0 && config.ellipse_level < 1.0))
            throw std::invalid_argument("ellipse-level must lie in (0, 1)");

        const RootSet set = find_roots(data.x, weights, search, options);
        err << "found " << set.roots.size() << " root(s), " << set.n_failed
            << " non-converged start(s)\n";

        if (!config.out_roots.empty()) {
            nlohmann::ordered_json meta;
            meta["timestamp"] = detail::utc_timestamp();
            meta["input"] = config.input;
            meta["columns"] = data.columns;
            meta["n"] = data.n();
            meta["p"] = data.dim();
            meta["log_transform"] = config.log_transform;
            meta["a"] = weights.a;
            meta["c"] = weights.c;
            meta["alpha"] = weights.alpha;
            meta["scheme"] = config.scheme;
            meta["raf"] = config.raf;
            meta["subsamples"] = search.n_subsamples;
            meta["subsample_size"] = search.subsample_size;
            meta["seed"] = search.seed;
            meta["tol"] = options.tol;
            meta["max_iter"] = options.max_iter;
            meta["n_dirs"] = options.n_dirs;
            meta["n_failed"] = set.n_failed;
            std::ofstream file(config.out_roots);
            if (!file) throw CsvError("cannot open output file: " + config.out_roots);
            file << roots_to_json(set, std::move(meta)).dump(2) << "\n";
        }
        if (!config.out_ellipses.empty()) {
            if (data.dim() == 2 || data.dim() == 3) {
                write_ellipses_csv(config.out_ellipses, set, config.ellipse_level);
            } else {
                err << "ellipse output skipped: dimension " << data.dim()
                    << " has no 2D/3D boundary\n";
            }
        }
        if (!config.out_weights.empty()) write_weights_csv(config.out_weights, set);

        return set.roots.empty() ? 2 : 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace dwl
