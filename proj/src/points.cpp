#include "saturn/points.hpp"

#include <cmath>
#include <sstream>

#include "saturn/errors.hpp"

namespace saturn {

std::string_view to_string(Domain d) noexcept {
    return d == Domain::unit_interval ? "unit_interval" : "sphere_S2";
}

namespace {

double norm3(const double *p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); }

[[noreturn]] void throw_domain(Domain d, std::span<const double> p) {
    std::ostringstream os;
    os.precision(17);
    os << "point (";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ") is outside " << to_string(d);
    throw Error(ErrorKind::domain, os.str());
}

}  // namespace

void check_point(Domain d, std::span<const double> p) {
    if (p.size() != static_cast<std::size_t>(dimension(d))) {
        throw Error(ErrorKind::domain, "point has dimension " + std::to_string(p.size()) + ", expected " +
                                           std::to_string(dimension(d)) + " for " + std::string(to_string(d)));
    }
    if (d == Domain::unit_interval) {
        if (!(p[0] >= 0.0 && p[0] <= 1.0)) throw_domain(d, p);
    } else {
        if (!(std::abs(norm3(p.data()) - 1.0) <= sphere_norm_tolerance)) throw_domain(d, p);
    }
}

SpherePoint::SpherePoint(double x, double y, double z) : c_{x, y, z} {
    check_point(Domain::sphere_s2, c_);
    const double r = norm3(c_.data());
    for (double &v : c_) v /= r;
}

PointSet::PointSet(Domain domain, Eigen::MatrixXd coords) : domain_(domain), coords_(std::move(coords)) {
    if (coords_.rows() != dimension(domain_)) {
        throw Error(ErrorKind::domain, "point set has " + std::to_string(coords_.rows()) + " rows, expected " +
                                           std::to_string(dimension(domain_)));
    }
    for (Eigen::Index i = 0; i < coords_.cols(); ++i) {
        check_point(domain_, point(i));
        if (domain_ == Domain::sphere_s2) coords_.col(i) /= coords_.col(i).norm();
    }
}

PointSet PointSet::interval(std::span<const double> xs) {
    Eigen::MatrixXd m(1, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = xs[i];
    return {Domain::unit_interval, std::move(m)};
}

PointSet PointSet::interval(std::initializer_list<double> xs) {
    return interval(std::span<const double>(xs.begin(), xs.size()));
}

PointSet PointSet::sphere(std::span<const SpherePoint> ps) {
    Eigen::MatrixXd m(3, static_cast<Eigen::Index>(ps.size()));
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (int k = 0; k < 3; ++k) m(k, static_cast<Eigen::Index>(i)) = ps[i][k];
    return {Domain::sphere_s2, std::move(m)};
}

}  // namespace saturn
