#include "edgealloc/scalar_opt.hpp"

#include <cmath>
#include <limits>

#include "edgealloc/errors.hpp"
#include "edgealloc/model.hpp"

namespace edgealloc {

namespace {

class Probe {
public:
    explicit Probe(const BoxedObjective& obj) : obj_(obj) {}

    double operator()(double x) {
        if (++count_ > kMaxScalarEvaluations)
            throw SolverError("minimize_box: evaluation budget of " + std::to_string(kMaxScalarEvaluations) +
                              " exhausted");
        double v = obj_.fn(x);
        if (!std::isfinite(v))
            throw NonFiniteObjective("minimize_box: objective is not finite at x=" + std::to_string(x));
        if (v < best_.value || (v == best_.value && x < best_.argmin)) {
            best_.argmin = x;
            best_.value = v;
        }
        return v;
    }

    ScalarMinimum result() const { return {best_.argmin, best_.value, count_}; }

private:
    const BoxedObjective& obj_;
    ScalarMinimum best_{0.0, std::numeric_limits<double>::infinity(), 0};
    int count_ = 0;
};

}  // namespace

ScalarMinimum minimize_box(const BoxedObjective& obj) {
    if (!(obj.lower < obj.upper)) throw DomainError("minimize_box: lower must be below upper");
    if (!(obj.tolerance > 0)) throw DomainError("minimize_box: tolerance must be positive");
    double a = obj.lower + kBoxMargin;
    double b = obj.upper - kBoxMargin;
    Probe probe(obj);
    if (!(a < b)) {
        probe(0.5 * (obj.lower + obj.upper));
        return probe.result();
    }
    probe(a);
    probe(b);
    probe(0.5 * (a + b));

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = probe(c);
    double fd = probe(d);
    while (b - a > obj.tolerance) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = probe(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = probe(d);
        }
    }
    return probe.result();
}

double finite_diff(const std::function<double(double)>& fn, double x, double h, int order, double lower,
                   double upper) {
    if (!(h > 0)) throw DomainError("finite_diff: step must be positive");
    if (x - h <= lower || x + h >= upper) throw DomainError("finite_diff: x±h leaves the domain");
    if (order == 1) return (fn(x + h) - fn(x - h)) / (2.0 * h);
    if (order == 2) return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
    throw DomainError("finite_diff: order must be 1 or 2");
}

Eigen::MatrixXd finite_diff_hessian(const std::function<double(const Eigen::VectorXd&)>& fn,
                                    const Eigen::VectorXd& x, const Eigen::VectorXd& steps) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd hess(n, n);
    const double f0 = fn(x);
    Eigen::VectorXd p = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double hi = steps[i];
        p[i] = x[i] + hi;
        const double fp = fn(p);
        p[i] = x[i] - hi;
        const double fm = fn(p);
        p[i] = x[i];
        hess(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double hj = steps[j];
            auto at = [&](double si, double sj) {
                p[i] = x[i] + si * hi;
                p[j] = x[j] + sj * hj;
                double v = fn(p);
                p[i] = x[i];
                p[j] = x[j];
                return v;
            };
            const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    return hess;
}

}  // namespace edgealloc
