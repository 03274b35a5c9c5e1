#include "saturn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "saturn/errors.hpp"

namespace saturn {

Quadrature Quadrature::simpson(int nodes) {
    if (nodes < 3 || nodes % 2 == 0) {
        throw Error(ErrorKind::configuration, "Simpson rule needs an odd node count >= 3, got " + std::to_string(nodes));
    }
    const int intervals = nodes - 1;
    const double h = 1.0 / intervals;
    Eigen::MatrixXd x(1, nodes);
    Eigen::VectorXd w(nodes);
    for (int i = 0; i < nodes; ++i) {
        x(0, i) = i == intervals ? 1.0 : i * h;
        const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w(i) = c * h / 3.0;
    }
    return {QuadratureScheme::simpson_interval, PointSet(Domain::unit_interval, std::move(x)), std::move(w)};
}

Quadrature Quadrature::monte_carlo_sphere(int points, std::uint64_t seed) {
    if (points < 1) throw Error(ErrorKind::configuration, "Monte-Carlo quadrature needs >= 1 point");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(3, points);
    for (int i = 0; i < points; ++i) {
        double r = 0.0;
        do {
            for (int k = 0; k < 3; ++k) x(k, i) = normal(rng);
            r = x.col(i).norm();
        } while (r == 0.0);
        x.col(i) /= r;
    }
    // Order nodes by latitude band then longitude, so consecutive nodes are
    // close together; kernel products can then skip distant anchors blockwise.
    const int bands = std::max(1, static_cast<int>(std::lround(std::sqrt(points / (std::numbers::pi * 512.0)))));
    std::vector<std::pair<std::pair<int, double>, int>> keys(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const int band = std::min(bands - 1, static_cast<int>((x(2, i) + 1.0) * 0.5 * bands));
        keys[static_cast<std::size_t>(i)] = {{band, std::atan2(x(1, i), x(0, i))}, i};
    }
    std::sort(keys.begin(), keys.end());
    Eigen::MatrixXd sorted(3, points);
    for (int i = 0; i < points; ++i) sorted.col(i) = x.col(keys[static_cast<std::size_t>(i)].second);
    x = std::move(sorted);

    Eigen::VectorXd w = Eigen::VectorXd::Constant(points, 1.0 / points);
    return {QuadratureScheme::monte_carlo_sphere, PointSet(Domain::sphere_s2, std::move(x)), std::move(w)};
}

double Quadrature::integrate(const Eigen::Ref<const Eigen::VectorXd> &values) const {
    if (values.size() != weights_.size()) {
        throw Error(ErrorKind::parameter, "quadrature has " + std::to_string(weights_.size()) + " nodes, got " +
                                              std::to_string(values.size()) + " values");
    }
    return weights_.dot(values);
}

double Quadrature::standard_error(const Eigen::Ref<const Eigen::VectorXd> &values) const {
    if (scheme_ != QuadratureScheme::monte_carlo_sphere) return 0.0;
    const double m = integrate(values);
    const auto n = static_cast<double>(values.size());
    if (n < 2) return 0.0;
    const double var = (values.array() - m).square().sum() / (n - 1.0);
    return std::sqrt(var / n);
}

void check_quadrature_domain(const Quadrature &q, Domain d) {
    if (q.domain() != d) {
        throw Error(ErrorKind::configuration, "quadrature integrates over " + std::string(to_string(q.domain())) +
                                                  " but the problem lives on " + std::string(to_string(d)));
    }
}

}  // namespace saturn
