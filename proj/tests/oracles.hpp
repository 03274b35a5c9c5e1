#pragma once

// Independent reference computations for tests. Nothing here goes through
// the library's eigendecomposition or prefix-sum paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double min_kernel(double x, double y) { return std::min(x, y); }
inline double heavyside_kernel(double x, double y) { return std::min(x, y) * (1.0 - std::max(x, y)); }

inline MatrixXd gram(const std::function<double(double, double)> &k, const std::vector<double> &x,
                     const std::vector<double> &z) {
    MatrixXd g(static_cast<Eigen::Index>(z.size()), static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k(z[i], x[j]);
    return g;
}

/// c solving (K(X,X) + nλ I) c = y by Cholesky.
inline VectorXd krr_direct(const MatrixXd &gram_xx, const VectorXd &y, double lambda) {
    const auto n = gram_xx.rows();
    MatrixXd a = gram_xx;
    a.diagonal().array() += static_cast<double>(n) * lambda;
    return a.llt().solve(y);
}

/// a = (1/n) U g(D) U' y with Eigen's own symmetric solver.
inline VectorXd filtered_duals(const MatrixXd &gram_xx, const VectorXd &y, const std::function<double(double)> &g) {
    const auto n = static_cast<double>(gram_xx.rows());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram_xx / n);
    VectorXd d = es.eigenvalues();
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = g(std::max(d(i), 0.0));
    return es.eigenvectors() * (d.cwiseProduct(es.eigenvectors().transpose() * y)) / n;
}

/// Composite Simpson nodes and probability weights on [0,1].
inline void simpson(int nodes, std::vector<double> &x, std::vector<double> &w) {
    x.resize(static_cast<std::size_t>(nodes));
    w.resize(static_cast<std::size_t>(nodes));
    const double h = 1.0 / (nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        x[static_cast<std::size_t>(i)] = i * h;
        w[static_cast<std::size_t>(i)] = (i == 0 || i == nodes - 1 ? 1.0 : (i % 2 ? 4.0 : 2.0)) * h / 3.0;
    }
}

inline double integrate(const std::function<double(double)> &f, int nodes = 20001) {
    std::vector<double> x, w;
    simpson(nodes, x, w);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
    return s;
}

/// Bias and variance of KRR from direct solves, evaluated on a Simpson grid:
///   bias_sq  = ∫ (f* - K(x,X)(K+nλ)^{-1} f*[X])²
///   variance = σ² ∫ ‖(K+nλ)^{-1} K(X,x)‖²
inline std::pair<double, double> krr_bias_variance(const std::function<double(double, double)> &k,
                                                   const std::function<double(double)> &f,
                                                   const std::vector<double> &x, double lambda, double sigma,
                                                   int nodes = 4001) {
    const auto n = static_cast<Eigen::Index>(x.size());
    MatrixXd a = gram(k, x, x);
    a.diagonal().array() += static_cast<double>(n) * lambda;
    const Eigen::LLT<MatrixXd> llt(a);
    VectorXd fx(n);
    for (Eigen::Index i = 0; i < n; ++i) fx(i) = f(x[static_cast<std::size_t>(i)]);
    const VectorXd c = llt.solve(fx);
    std::vector<double> z, w;
    simpson(nodes, z, w);
    const MatrixXd kz = gram(k, x, z);
    const MatrixXd s = llt.solve(kz.transpose());
    double bias = 0.0, var = 0.0;
    for (std::size_t q = 0; q < z.size(); ++q) {
        const double r = f(z[q]) - kz.row(static_cast<Eigen::Index>(q)).dot(c);
        bias += w[q] * r * r;
        var += w[q] * s.col(static_cast<Eigen::Index>(q)).squaredNorm();
    }
    return {bias, sigma * sigma * var};
}

/// Σ_{i<=terms} (λ_i/(λ_i+λ))^p with λ_i = (π(i - shift))^{-2}, summed from the tail up.
inline double effective_dimension_bruteforce(double shift, double lambda, double p, long terms) {
    double s = 0.0;
    for (long i = terms; i >= 1; --i) {
        const double li = 1.0 / std::pow(std::numbers::pi * (static_cast<double>(i) - shift), 2);
        s += std::pow(li / (li + lambda), p);
    }
    return s;
}

/// Σ_{n>=1} 1/(1+a²n²)² in closed form (from the partial-fraction expansion of coth):
///   with b = π/a:  (-2 + b coth b + b² csch² b) / 4
inline double heavyside_n2_closed_form(double lambda) {
    const double a = std::numbers::pi * std::sqrt(lambda);
    const double b = std::numbers::pi / a;
    const double coth = 1.0 / std::tanh(b);
    const double csch = 1.0 / std::sinh(b);
    return (-2.0 + b * coth + b * b * csch * csch) / 4.0;
}

inline std::vector<double> uniform_points(std::mt19937_64 &rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double &v : x) v = u(rng);
    return x;
}

}  // namespace oracle
