#pragma once

#include <optional>

#include <Eigen/Dense>

namespace conlab {

/// Agent positions (one row per agent, one column per coordinate) and,
/// for second-order dynamics, velocities of the same shape.
struct SystemState {
    Eigen::MatrixXd x;
    std::optional<Eigen::MatrixXd> v;

    SystemState() = default;
    explicit SystemState(Eigen::MatrixXd positions) : x(std::move(positions)) {}
    SystemState(Eigen::MatrixXd positions, Eigen::MatrixXd velocities);

    Eigen::Index agents() const { return x.rows(); }
    Eigen::Index dim() const { return x.cols(); }
    bool second_order() const { return v.has_value(); }
    bool finite() const;

    /// Scalar opinions, one per agent.
    static SystemState scalar(std::initializer_list<double> values);
    static SystemState scalar(std::initializer_list<double> values, std::initializer_list<double> velocities);
};

double squared_distance(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j);

}  // namespace conlab
