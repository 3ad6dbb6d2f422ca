// Generate the two-cluster benchmark, run the root search with the
// bivariate settings, and print every root found.

#include <cstdio>

#include <dwl/dwl.hpp>

int main() {
    const dwl::Dataset data = dwl::two_cluster(42);

    dwl::WeightConfig weights; // a=0.05, c=200, alpha=0.5
    dwl::RootSearchConfig search;
    search.n_subsamples = 500;
    search.subsample_size = 6;
    search.seed = 42;

    const dwl::RootSet set = dwl::find_roots(data.x, weights, search, {});

    std::printf("%zu root(s) from %d subsample starts (%d failed)\n", set.roots.size(),
                search.n_subsamples, set.n_failed);
    for (std::size_t r = 0; r < set.roots.size(); ++r) {
        const dwl::FitResult& fit = set.roots[r];
        std::printf("root %zu: mu = (%.4f, %.4f)  weight_sum = %.2f  basins = %d\n", r,
                    fit.theta.mu[0], fit.theta.mu[1], fit.weight_sum, set.basin_counts[r]);
        std::printf("         sigma = [%.4f %.4f; %.4f %.4f]\n", fit.theta.sigma(0, 0),
                    fit.theta.sigma(0, 1), fit.theta.sigma(1, 0), fit.theta.sigma(1, 1));
    }
    return set.roots.empty() ? 1 : 0;
}
