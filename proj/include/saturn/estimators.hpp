#pragma once

#include <functional>
#include <span>

#include <Eigen/Core>

#include "saturn/kernels.hpp"
#include "saturn/linalg.hpp"
#include "saturn/points.hpp"
#include "saturn/quadrature.hpp"
#include "saturn/spectral_filters.hpp"

namespace saturn {

/// Regression function f*: domain point -> value.
using TargetFunction = std::function<double(std::span<const double>)>;

/// Values of f at every point of `p`.
Eigen::VectorXd sample(const TargetFunction &f, const PointSet &p);

struct Dataset {
    PointSet inputs;
    Eigen::VectorXd outputs;
    double noise_sigma = 0.0;

    /// Throws ErrorKind::empty_data if n = 0, ErrorKind::parameter on size mismatch.
    Dataset(PointSet inputs, Eigen::VectorXd outputs, double noise_sigma = 0.0);

    [[nodiscard]] Eigen::Index size() const noexcept { return inputs.size(); }
};

/// f̂(x) = Σ_i a_i k(x, x_i), with a = (1/n) g_λ(K) y and K = K(X,X)/n.
class FittedRegressor {
public:
    FittedRegressor(Kernel kernel, FilterId filter, double lambda, PointSet anchors, Eigen::VectorXd dual);

    [[nodiscard]] const Kernel &kernel() const noexcept { return kernel_; }
    [[nodiscard]] FilterId filter() const noexcept { return filter_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] const PointSet &anchors() const noexcept { return anchors_; }
    [[nodiscard]] const Eigen::VectorXd &dual_coefficients() const noexcept { return dual_; }

    [[nodiscard]] double predict(std::span<const double> x) const;
    [[nodiscard]] double predict(double x) const { return predict(std::span<const double>(&x, 1)); }
    [[nodiscard]] Eigen::VectorXd predict(const PointSet &z) const;

private:
    Kernel kernel_;
    FilterId filter_;
    double lambda_;
    PointSet anchors_;
    Eigen::VectorXd dual_;
};

/// a = (1/n) U g_λ(D) U' y for a precomputed spectrum.
Eigen::VectorXd dual_coefficients(const GramSpectrum &spectrum, FilterId filter, const Eigen::VectorXd &y,
                                  double lambda);

FittedRegressor fit(const Kernel &kernel, FilterId filter, const Dataset &data, double lambda,
                    EigenSolver solver = EigenSolver::automatic);

/// ∫ (f̂ - f*)^2 dμ under `quad`.
double l2_error(const FittedRegressor &reg, const TargetFunction &f_star, const Quadrature &quad);

/// Same, from predictions and targets already sampled at the quadrature nodes.
double l2_error(const Eigen::VectorXd &predicted, const Eigen::VectorXd &target, const Quadrature &quad);

}  // namespace saturn
