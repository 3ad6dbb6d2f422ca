#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace dwl {

/// Observation matrix (rows are observations) plus column metadata.
struct Dataset {
    Eigen::MatrixXd x;
    std::vector<std::string> columns;

    Eigen::Index n() const { return x.rows(); }
    Eigen::Index dim() const { return x.cols(); }
};

} // namespace dwl
