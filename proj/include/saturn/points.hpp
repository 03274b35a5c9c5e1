#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace saturn {

enum class Domain { unit_interval, sphere_s2 };

constexpr int dimension(Domain d) noexcept { return d == Domain::unit_interval ? 1 : 3; }

std::string_view to_string(Domain d) noexcept;

/// Tolerance on |‖p‖ - 1| accepted before renormalizing a sphere point.
inline constexpr double sphere_norm_tolerance = 1e-12;

/// Point on S^2 with unit Euclidean norm.
class SpherePoint {
public:
    /// Throws ErrorKind::domain unless |‖(x,y,z)‖ - 1| <= sphere_norm_tolerance; renormalizes.
    SpherePoint(double x, double y, double z);

    [[nodiscard]] const std::array<double, 3> &coordinates() const noexcept { return c_; }
    [[nodiscard]] double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] std::span<const double> span() const noexcept { return c_; }

private:
    std::array<double, 3> c_;
};

/// An ordered set of points of one domain, stored column-per-point (dim x n).
class PointSet {
public:
    /// Validates every column; sphere columns are renormalized.
    PointSet(Domain domain, Eigen::MatrixXd coords);

    static PointSet interval(std::span<const double> xs);
    static PointSet interval(std::initializer_list<double> xs);
    static PointSet sphere(std::span<const SpherePoint> ps);

    [[nodiscard]] Domain domain() const noexcept { return domain_; }
    [[nodiscard]] int dim() const noexcept { return dimension(domain_); }
    [[nodiscard]] Eigen::Index size() const noexcept { return coords_.cols(); }
    [[nodiscard]] bool empty() const noexcept { return coords_.cols() == 0; }

    [[nodiscard]] std::span<const double> point(Eigen::Index i) const noexcept {
        return {coords_.col(i).data(), static_cast<std::size_t>(coords_.rows())};
    }
    /// Interval coordinate of point i (only meaningful on the unit interval).
    [[nodiscard]] double x(Eigen::Index i) const noexcept { return coords_(0, i); }
    [[nodiscard]] const Eigen::MatrixXd &coords() const noexcept { return coords_; }

private:
    Domain domain_;
    Eigen::MatrixXd coords_;
};

/// Throws ErrorKind::domain if `p` is not a valid point of `d`.
void check_point(Domain d, std::span<const double> p);

}  // namespace saturn
