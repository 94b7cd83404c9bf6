#include "conlab/state.hpp"

#include <vector>

#include "conlab/errors.hpp"

namespace conlab {

namespace {

Eigen::MatrixXd column(std::initializer_list<double> values) {
    std::vector<double> data(values);
    return Eigen::Map<Eigen::VectorXd>(data.data(), static_cast<Eigen::Index>(data.size()));
}

}  // namespace

SystemState::SystemState(Eigen::MatrixXd positions, Eigen::MatrixXd velocities)
    : x(std::move(positions)), v(std::move(velocities)) {
    if (v->rows() != x.rows() || v->cols() != x.cols())
        throw InvalidInput("velocity block must match the position block shape");
}

bool SystemState::finite() const { return x.allFinite() && (!v || v->allFinite()); }

SystemState SystemState::scalar(std::initializer_list<double> values) { return SystemState(column(values)); }

SystemState SystemState::scalar(std::initializer_list<double> values, std::initializer_list<double> velocities) {
    return SystemState(column(values), column(velocities));
}

double squared_distance(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j) {
    return (x.row(i) - x.row(j)).squaredNorm();
}

}  // namespace conlab
