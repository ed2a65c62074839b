#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>

namespace edgealloc {

/// A scalar objective restricted to [lower, upper].
struct BoxedObjective {
    std::function<double(double)> fn;
    double lower = 0.0;
    double upper = 1.0;
    double tolerance = 1e-8;
};

struct ScalarMinimum {
    double argmin = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

inline constexpr int kMaxScalarEvaluations = 200;

/// Golden-section search on [lower+kBoxMargin, upper−kBoxMargin].
/// The result is the best probed point, with the shifted endpoints and midpoint as candidates;
/// ties go to the smallest x. Throws NonFiniteObjective on a non-finite probe and SolverError
/// when the evaluation budget runs out.
ScalarMinimum minimize_box(const BoxedObjective& obj);

/// Central difference of order 1 or 2. Throws DomainError if x±h leaves [lower, upper].
double finite_diff(const std::function<double(double)>& fn, double x, double h, int order,
                   double lower = -std::numeric_limits<double>::infinity(),
                   double upper = std::numeric_limits<double>::infinity());

/// Central-difference Hessian with per-coordinate steps.
Eigen::MatrixXd finite_diff_hessian(const std::function<double(const Eigen::VectorXd&)>& fn,
                                    const Eigen::VectorXd& x, const Eigen::VectorXd& steps);

}  // namespace edgealloc
