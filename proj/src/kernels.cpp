#include "saturn/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "saturn/errors.hpp"

namespace saturn {

using Eigen::Index;
using std::numbers::pi;

Kernel Kernel::min_interval() { return {KernelId::min_interval, 1}; }
Kernel Kernel::heavyside_interval() { return {KernelId::heavyside_interval, 1}; }

Kernel Kernel::truncated_power(int p) {
    if (p < 1) throw Error(ErrorKind::parameter, "truncated power kernel needs p >= 1, got " + std::to_string(p));
    return {KernelId::truncpow_sphere, p};
}

Kernel Kernel::parse(std::string_view id) {
    if (id == "min") return min_interval();
    if (id == "heavyside") return heavyside_interval();
    constexpr std::string_view prefix = "truncpow";
    if (id.starts_with(prefix)) {
        auto digits = id.substr(prefix.size());
        int p = 0;
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec == std::errc{} && end == digits.data() + digits.size() && !digits.empty()) return truncated_power(p);
    }
    throw Error(ErrorKind::configuration, "unknown kernel id '" + std::string(id) +
                                              "' (expected min, heavyside or truncpow<p>)");
}

Domain Kernel::domain() const noexcept {
    return id_ == KernelId::truncpow_sphere ? Domain::sphere_s2 : Domain::unit_interval;
}

std::string Kernel::name() const {
    switch (id_) {
        case KernelId::min_interval: return "min";
        case KernelId::heavyside_interval: return "heavyside";
        case KernelId::truncpow_sphere: return "truncpow" + std::to_string(power_);
    }
    return "?";
}

double Kernel::kappa_sq() const noexcept {
    switch (id_) {
        case KernelId::min_interval: return 1.0;         // k(1,1)
        case KernelId::heavyside_interval: return 0.25;  // k(1/2,1/2)
        case KernelId::truncpow_sphere: return 1.0;
    }
    return 1.0;
}

double Kernel::eval_raw(const double *x, const double *y) const noexcept {
    switch (id_) {
        case KernelId::min_interval: return std::min(x[0], y[0]);
        case KernelId::heavyside_interval: return std::min(x[0], y[0]) * (1.0 - std::max(x[0], y[0]));
        case KernelId::truncpow_sphere: {
            const double d0 = x[0] - y[0], d1 = x[1] - y[1], d2 = x[2] - y[2];
            const double t = 1.0 - std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
            if (t <= 0.0) return 0.0;
            double r = t;
            for (int k = 1; k < power_; ++k) r *= t;
            return r;
        }
    }
    return 0.0;
}

double Kernel::evaluate(std::span<const double> x, std::span<const double> y) const {
    check_point(domain(), x);
    check_point(domain(), y);
    if (domain() == Domain::sphere_s2) {
        // renormalize within tolerance, same as PointSet
        const SpherePoint px(x[0], x[1], x[2]), py(y[0], y[1], y[2]);
        return eval_raw(px.coordinates().data(), py.coordinates().data());
    }
    return eval_raw(x.data(), y.data());
}

double Kernel::evaluate(double x, double y) const {
    if (domain() != Domain::unit_interval) {
        throw Error(ErrorKind::domain, "kernel " + name() + " takes sphere points, not scalars");
    }
    check_point(domain(), std::span<const double>(&x, 1));
    check_point(domain(), std::span<const double>(&y, 1));
    return id_ == KernelId::min_interval ? std::min(x, y) : std::min(x, y) * (1.0 - std::max(x, y));
}

namespace {

void check_same_domain(const Kernel &k, const PointSet &p) {
    if (p.domain() != k.domain()) {
        throw Error(ErrorKind::configuration, "kernel " + k.name() + " lives on " + std::string(to_string(k.domain())) +
                                                  " but points are on " + std::string(to_string(p.domain())));
    }
}

}  // namespace

Eigen::MatrixXd Kernel::gram(const PointSet &x) const {
    check_same_domain(*this, x);
    const Index n = x.size();
    Eigen::MatrixXd g(n, n);
    const double *c = x.coords().data();
    const int d = x.dim();
    for (Index j = 0; j < n; ++j) {
        for (Index i = j; i < n; ++i) {
            const double v = eval_raw(c + i * d, c + j * d);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

Eigen::MatrixXd Kernel::cross(const PointSet &z, const PointSet &x) const {
    check_same_domain(*this, z);
    check_same_domain(*this, x);
    const Index nz = z.size(), nx = x.size();
    Eigen::MatrixXd g(nz, nx);
    const double *cz = z.coords().data();
    const double *cx = x.coords().data();
    const int d = x.dim();
    for (Index j = 0; j < nx; ++j)
        for (Index i = 0; i < nz; ++i) g(i, j) = eval_raw(cz + i * d, cx + j * d);
    return g;
}

// Column-wise array form of eval_raw for the sphere kernel, so the
// distance/sqrt/power chain vectorizes over a block of rows.
void Kernel::sphere_block(const Eigen::Ref<const Eigen::MatrixXd> &z, const Eigen::MatrixXd &x,
                          Eigen::MatrixXd &out) const {
    const Index rows = z.cols();
    const Eigen::ArrayXd z0 = z.row(0).transpose(), z1 = z.row(1).transpose(), z2 = z.row(2).transpose();
    out.resize(rows, x.cols());
    Eigen::ArrayXd t(rows);
    for (Index j = 0; j < x.cols(); ++j) {
        t = 1.0 - ((z0 - x(0, j)).square() + (z1 - x(1, j)).square() + (z2 - x(2, j)).square()).sqrt();
        t = t.max(0.0);
        Eigen::ArrayXd r = t;
        for (int k = 1; k < power_; ++k) r *= t;
        out.col(j) = r.matrix();
    }
}

Eigen::MatrixXd Kernel::apply(const PointSet &z, const PointSet &x, const Eigen::MatrixXd &v) const {
    check_same_domain(*this, z);
    check_same_domain(*this, x);
    if (v.rows() != x.size()) {
        throw Error(ErrorKind::parameter, "apply: coefficient rows " + std::to_string(v.rows()) +
                                              " != number of anchors " + std::to_string(x.size()));
    }
    if (is_interval_markov()) return apply_interval(z, x, v);

    constexpr Index block = 512;
    Eigen::MatrixXd out(z.size(), v.cols());
    Eigen::MatrixXd kb, xs, vs;
    std::vector<Index> keep;
    for (Index start = 0; start < z.size(); start += block) {
        const Index rows = std::min(block, z.size() - start);
        const auto zb = z.coords().middleCols(start, rows);
        // Anchors farther than 1 + radius from the block centre see only zeros.
        const Eigen::Vector3d centre = zb.rowwise().mean();
        const double radius = (zb.colwise() - centre).colwise().norm().maxCoeff();
        keep.clear();
        for (Index j = 0; j < x.size(); ++j)
            if ((x.coords().col(j) - centre).norm() < 1.0 + radius) keep.push_back(j);
        if (keep.empty()) {
            out.middleRows(start, rows).setZero();
            continue;
        }
        const auto m = static_cast<Index>(keep.size());
        xs.resize(3, m);
        vs.resize(m, v.cols());
        for (Index j = 0; j < m; ++j) {
            xs.col(j) = x.coords().col(keep[static_cast<std::size_t>(j)]);
            vs.row(j) = v.row(keep[static_cast<std::size_t>(j)]);
        }
        sphere_block(zb, xs, kb);
        out.middleRows(start, rows).noalias() = kb * vs;
    }
    return out;
}

// Both interval kernels are sums of products of monotone pieces:
//   min:       k(z,x) = x          for x <= z,  z          otherwise
//   heavyside: k(z,x) = x (1 - z)  for x <= z,  z (1 - x)  otherwise
// so with sorted anchors each row of K(Z,X) V is a combination of one prefix
// and one suffix sum.
Eigen::MatrixXd Kernel::apply_interval(const PointSet &z, const PointSet &x, const Eigen::MatrixXd &v) const {
    const Index n = x.size();
    const Index cols = v.cols();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return x.x(a) < x.x(b); });
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) xs[static_cast<std::size_t>(j)] = x.x(order[static_cast<std::size_t>(j)]);

    const bool bridge = id_ == KernelId::heavyside_interval;
    Eigen::MatrixXd lower(cols, n + 1), upper(cols, n + 1);
    lower.col(0).setZero();
    for (Index j = 0; j < n; ++j)
        lower.col(j + 1) = lower.col(j) + xs[static_cast<std::size_t>(j)] *
                                              v.row(order[static_cast<std::size_t>(j)]).transpose();
    upper.col(n).setZero();
    for (Index j = n - 1; j >= 0; --j) {
        const double w = bridge ? 1.0 - xs[static_cast<std::size_t>(j)] : 1.0;
        upper.col(j) = upper.col(j + 1) + w * v.row(order[static_cast<std::size_t>(j)]).transpose();
    }

    Eigen::MatrixXd out(z.size(), cols);
    for (Index q = 0; q < z.size(); ++q) {
        const double t = z.x(q);
        const auto j = std::upper_bound(xs.begin(), xs.end(), t) - xs.begin();
        const double a = bridge ? 1.0 - t : 1.0;
        out.row(q) = (a * lower.col(j) + t * upper.col(j)).transpose();
    }
    return out;
}

// ---------------------------------------------------------------------------

EigenSystem eigen_system(const Kernel &kernel) {
    switch (kernel.id()) {
        case KernelId::min_interval: return {KernelId::min_interval, 0.5, EigenSystem::default_truncation};
        case KernelId::heavyside_interval: return {KernelId::heavyside_interval, 0.0, EigenSystem::default_truncation};
        case KernelId::truncpow_sphere: break;
    }
    throw Error(ErrorKind::unsupported, "kernel " + kernel.name() +
                                            " has no analytic eigen-system; use a theta schedule instead");
}

EigenSystem EigenSystem::with_truncation(int m) const {
    if (m < 1) throw Error(ErrorKind::parameter, "truncation must be >= 1");
    EigenSystem e = *this;
    e.truncation_m_ = m;
    return e;
}

double EigenSystem::frequency(double i) const noexcept { return pi * (i - shift_); }

double EigenSystem::eigenvalue(int i) const {
    if (i < 1) throw Error(ErrorKind::parameter, "eigen index must be >= 1, got " + std::to_string(i));
    const double w = frequency(i);
    return 1.0 / (w * w);
}

double EigenSystem::eigenfunction(int i, double x) const {
    if (i < 1) throw Error(ErrorKind::parameter, "eigen index must be >= 1, got " + std::to_string(i));
    check_point(Domain::unit_interval, std::span<const double>(&x, 1));
    return std::numbers::sqrt2 * std::sin(frequency(i) * x);
}

std::pair<double, double> EigenSystem::decay_constants() const noexcept {
    // λ_i i^2 = i^2 / (π^2 (i - s)^2) is nonincreasing in i with limit 1/π^2.
    const double lo = 1.0 / (pi * pi);
    const double hi = 1.0 / (pi * pi * (1.0 - shift_) * (1.0 - shift_));
    return {lo, hi};
}

double EigenSystem::mercer_partial_sum(int m, double x, double y) const {
    if (m < 1) throw Error(ErrorKind::parameter, "Mercer partial sum needs m >= 1");
    check_point(Domain::unit_interval, std::span<const double>(&x, 1));
    check_point(Domain::unit_interval, std::span<const double>(&y, 1));
    // Sum smallest terms first.
    double s = 0.0;
    for (int i = m; i >= 1; --i) {
        const double w = frequency(i);
        s += 2.0 * std::sin(w * x) * std::sin(w * y) / (w * w);
    }
    return s;
}

// ---------------------------------------------------------------------------

double spherical_harmonic(int l, int m, const SpherePoint &p) {
    const double x1 = p[0], x2 = p[1], x3 = p[2];
    if (l == 1 && m == 1) return std::sqrt(3.0 / (4.0 * pi)) * x1;
    if (l == 2 && m == -2) return 0.5 * std::sqrt(15.0 / pi) * x1 * x2;
    if (l == 3 && m == 2) return 0.25 * std::sqrt(105.0 / pi) * (x1 * x1 - x2 * x2) * x3;
    throw Error(ErrorKind::unsupported, "spherical harmonic Y_" + std::to_string(l) + "^" + std::to_string(m) +
                                            " is not available (supported: (1,1), (2,-2), (3,2))");
}

double normalized_spherical_harmonic(int l, int m, const SpherePoint &p) {
    return std::sqrt(4.0 * pi) * spherical_harmonic(l, m, p);
}

}  // namespace saturn
