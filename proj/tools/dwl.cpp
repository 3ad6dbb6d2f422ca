// dwl: depth-weighted likelihood root search for multivariate normal data.

#include <CLI11.hpp>

#include <dwl/dwl.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Depth-weighted likelihood estimation: finds the roots of the "
                 "weighted estimating equations for a multivariate normal model, "
                 "weighting each observation by its halfspace-depth agreement with "
                 "the fitted model."};

    dwl::RunConfig config;
    app.add_option("--input", config.input, "Input CSV path (destination when --generate is set)");
    app.add_option("--columns", config.columns,
                   "Columns to use, by header name or 0-based index (default: all)");
    app.add_flag("--log", config.log_transform, "Apply a natural-log transform to the data");

    app.add_option("--a", config.a, "H-function decay rate a")->capture_default_str();
    app.add_option("--c", config.c, "H-function cutoff c")->capture_default_str();
    app.add_option("--alpha", config.alpha,
                   "Central region level: model depth above alpha/2 keeps full weight")
        ->capture_default_str();
    app.add_option("--scheme", config.scheme, "Downweighting scheme")
        ->check(CLI::IsMember({"h", "raf"}))
        ->capture_default_str();
    app.add_option("--raf", config.raf, "Residual adjustment function for --scheme raf")
        ->check(CLI::IsMember({"identity", "hellinger"}))
        ->capture_default_str();

    app.add_option("--subsamples", config.subsamples, "Number of subsample starts")
        ->capture_default_str();
    app.add_option("--subsample-size", config.subsample_size,
                   "Observations per subsample (at least dim+1)")
        ->capture_default_str();
    app.add_option("--seed", config.seed, "RNG seed; fixes subsamples and depth directions")
        ->capture_default_str();
    app.add_option("--tol", config.tol, "Relative-change convergence tolerance")
        ->capture_default_str();
    app.add_option("--max-iter", config.max_iter, "Iteration cap per start")
        ->capture_default_str();
    app.add_option("--n-dirs", config.n_dirs,
                   "Directions for approximate depth in dimension 3+ (0 = 1000*dim)")
        ->capture_default_str();

    app.add_option("--ellipse-level", config.ellipse_level, "Coverage level of output ellipses")
        ->capture_default_str();
    app.add_option("--out-roots", config.out_roots, "Write the roots JSON here");
    app.add_option("--out-ellipses", config.out_ellipses, "Write ellipse polylines CSV here");
    app.add_option("--out-weights", config.out_weights, "Write per-root weights CSV here");

    app.add_option("--generate", config.generate,
                   "Write a synthetic dataset to --input before running")
        ->check(CLI::IsMember({"two-cluster", "three-cluster"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage problems are input errors
    }

    return dwl::run(config);
}
