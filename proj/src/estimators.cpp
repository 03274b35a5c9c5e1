#include "saturn/estimators.hpp"

#include <cmath>
#include <string>

#include "saturn/errors.hpp"

namespace saturn {

Eigen::VectorXd sample(const TargetFunction &f, const PointSet &p) {
    Eigen::VectorXd v(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) v(i) = f(p.point(i));
    return v;
}

Dataset::Dataset(PointSet in, Eigen::VectorXd out, double sigma)
    : inputs(std::move(in)), outputs(std::move(out)), noise_sigma(sigma) {
    if (inputs.empty()) throw Error(ErrorKind::empty_data, "dataset has no samples");
    if (inputs.size() != outputs.size()) {
        throw Error(ErrorKind::parameter, "dataset has " + std::to_string(inputs.size()) + " inputs but " +
                                              std::to_string(outputs.size()) + " outputs");
    }
    if (!(noise_sigma >= 0.0)) throw Error(ErrorKind::parameter, "noise sigma must be nonnegative");
}

FittedRegressor::FittedRegressor(Kernel kernel, FilterId filter, double lambda, PointSet anchors,
                                 Eigen::VectorXd dual)
    : kernel_(kernel), filter_(filter), lambda_(lambda), anchors_(std::move(anchors)), dual_(std::move(dual)) {
    if (anchors_.size() != dual_.size()) throw Error(ErrorKind::parameter, "anchor/coefficient size mismatch");
}

double FittedRegressor::predict(std::span<const double> x) const {
    check_point(kernel_.domain(), x);
    double s = 0.0;
    for (Eigen::Index i = 0; i < anchors_.size(); ++i) s += dual_(i) * kernel_.evaluate(x, anchors_.point(i));
    return s;
}

Eigen::VectorXd FittedRegressor::predict(const PointSet &z) const { return kernel_.apply(z, anchors_, dual_); }

Eigen::VectorXd dual_coefficients(const GramSpectrum &spectrum, FilterId filter, const Eigen::VectorXd &y,
                                  double lambda) {
    const Eigen::Index n = spectrum.size();
    if (y.size() != n) throw Error(ErrorKind::parameter, "response length does not match the Gram spectrum");
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = filter_value(filter, spectrum.eigenvalues(i), lambda);
    Eigen::VectorXd proj = spectrum.eigenvectors.transpose() * y;
    Eigen::VectorXd a = spectrum.eigenvectors * (g.cwiseProduct(proj) / static_cast<double>(n));
    if (!a.allFinite()) throw Error(ErrorKind::numeric, "non-finite dual coefficients");
    return a;
}

FittedRegressor fit(const Kernel &kernel, FilterId filter, const Dataset &data, double lambda, EigenSolver solver) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::parameter, "lambda must be positive, got " + std::to_string(lambda));
    const GramSpectrum spec = decompose_gram(kernel, data.inputs, solver);
    return {kernel, filter, lambda, data.inputs, dual_coefficients(spec, filter, data.outputs, lambda)};
}

double l2_error(const Eigen::VectorXd &predicted, const Eigen::VectorXd &target, const Quadrature &quad) {
    if (predicted.size() != quad.size() || target.size() != quad.size()) {
        throw Error(ErrorKind::configuration, "values do not match the quadrature node count");
    }
    return quad.integrate((predicted - target).array().square().matrix());
}

double l2_error(const FittedRegressor &reg, const TargetFunction &f_star, const Quadrature &quad) {
    check_quadrature_domain(quad, reg.kernel().domain());
    return l2_error(reg.predict(quad.nodes()), sample(f_star, quad.nodes()), quad);
}

}  // namespace saturn
