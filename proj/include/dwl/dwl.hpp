#pragma once

// Depth-weighted likelihood estimation for the multivariate normal model:
// halfspace-depth Pearson residuals, downweighting schemes, the weighted
// estimating-equation fixed point, and subsample-seeded multi-root search.

#include "dwl/dataset.hpp"
#include "dwl/depth.hpp"
#include "dwl/errors.hpp"
#include "dwl/estimator.hpp"
#include "dwl/io.hpp"
#include "dwl/numerics.hpp"
#include "dwl/rng.hpp"
#include "dwl/roots.hpp"
#include "dwl/run.hpp"
#include "dwl/synthetic.hpp"
#include "dwl/weights.hpp"
