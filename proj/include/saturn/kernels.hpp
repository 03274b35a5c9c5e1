#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "saturn/points.hpp"

namespace saturn {

enum class KernelId { min_interval, heavyside_interval, truncpow_sphere };

/// Positive-definite kernels with closed forms:
///   min         k(x,y) = min(x,y)                   on [0,1]
///   heavyside   k(x,y) = min(x,y)(1 - max(x,y))     on [0,1]
///   truncpow<p> k(x,y) = (1 - ‖x-y‖)_+^p            on S^2
class Kernel {
public:
    static Kernel min_interval();
    static Kernel heavyside_interval();
    /// p >= 1; positive definite on S^2 for p >= 3.
    static Kernel truncated_power(int p);
    /// Stable ids: "min", "heavyside", "truncpow3", "truncpow4", ...
    static Kernel parse(std::string_view id);

    [[nodiscard]] KernelId id() const noexcept { return id_; }
    [[nodiscard]] int power() const noexcept { return power_; }
    [[nodiscard]] Domain domain() const noexcept;
    [[nodiscard]] std::string name() const;
    /// sup_x k(x,x); bounds |k(x,y)|.
    [[nodiscard]] double kappa_sq() const noexcept;
    /// Hölder exponent of k; informational only.
    [[nodiscard]] double holder_exponent() const noexcept { return 1.0; }

    /// k(x,y) with domain checks on both arguments.
    [[nodiscard]] double evaluate(std::span<const double> x, std::span<const double> y) const;
    [[nodiscard]] double operator()(std::span<const double> x, std::span<const double> y) const {
        return evaluate(x, y);
    }
    [[nodiscard]] double evaluate(double x, double y) const;

    /// Raw Gram matrix K(X,X) (not divided by n).
    [[nodiscard]] Eigen::MatrixXd gram(const PointSet &x) const;
    /// Raw cross matrix K(Z,X), |Z| x |X|.
    [[nodiscard]] Eigen::MatrixXd cross(const PointSet &z, const PointSet &x) const;
    /// K(Z,X) * v without materializing K(Z,X) when the kernel allows it.
    [[nodiscard]] Eigen::MatrixXd apply(const PointSet &z, const PointSet &x, const Eigen::MatrixXd &v) const;

    /// True for the interval kernels, whose sorted Gram matrix has a tridiagonal inverse.
    [[nodiscard]] bool is_interval_markov() const noexcept { return id_ != KernelId::truncpow_sphere; }

    friend bool operator==(const Kernel &, const Kernel &) = default;

private:
    Kernel(KernelId id, int power) : id_(id), power_(power) {}

    // No domain checks; points are already validated by PointSet.
    void sphere_block(const Eigen::Ref<const Eigen::MatrixXd> &z, const Eigen::MatrixXd &x, Eigen::MatrixXd &out) const;
    double eval_raw(const double *x, const double *y) const noexcept;
    [[nodiscard]] Eigen::MatrixXd apply_interval(const PointSet &z, const PointSet &x,
                                                 const Eigen::MatrixXd &v) const;

    KernelId id_;
    int power_;
};

/// Analytic Mercer system of an interval kernel:
///   λ_i = (π (i - s))^{-2},  e_i(x) = √2 sin(π (i - s) x),
/// with s = 1/2 for min (Brownian motion) and s = 0 for heavyside (Brownian bridge).
/// Orthonormal in L^2 of the uniform measure on [0,1]; β = 0.5.
class EigenSystem {
public:
    static constexpr int default_truncation = 2000;

    [[nodiscard]] KernelId kernel() const noexcept { return kernel_; }
    [[nodiscard]] double beta() const noexcept { return 0.5; }
    [[nodiscard]] int truncation_m() const noexcept { return truncation_m_; }
    [[nodiscard]] EigenSystem with_truncation(int m) const;

    /// i >= 1.
    [[nodiscard]] double eigenvalue(int i) const;
    [[nodiscard]] double eigenfunction(int i, double x) const;
    /// π (i - s); λ_i = frequency(i)^{-2}. Defined for real i for tail integrals.
    [[nodiscard]] double frequency(double i) const noexcept;
    [[nodiscard]] double index_shift() const noexcept { return shift_; }
    /// ‖T‖ = λ_1.
    [[nodiscard]] double operator_norm() const { return eigenvalue(1); }

    /// Constants (c1, c2) with c1 i^{-1/β} <= λ_i <= c2 i^{-1/β} for all i >= 1.
    [[nodiscard]] std::pair<double, double> decay_constants() const noexcept;

    /// Σ_{i<=m} λ_i e_i(x) e_i(y).
    [[nodiscard]] double mercer_partial_sum(int m, double x, double y) const;

private:
    friend EigenSystem eigen_system(const Kernel &kernel);
    EigenSystem(KernelId k, double shift, int m) : kernel_(k), shift_(shift), truncation_m_(m) {}

    KernelId kernel_;
    double shift_;
    int truncation_m_;
};

/// Throws ErrorKind::unsupported for kernels without an analytic system.
EigenSystem eigen_system(const Kernel &kernel);

/// Real spherical harmonic Y_l^m with the surface-measure normalization
/// (∫_{S^2} Y² dσ = 1). Supported (l,m): (1,1), (2,-2), (3,2).
double spherical_harmonic(int l, int m, const SpherePoint &p);

/// √(4π) Y_l^m: unit norm in L^2 of the uniform probability measure on S^2.
double normalized_spherical_harmonic(int l, int m, const SpherePoint &p);

}  // namespace saturn
