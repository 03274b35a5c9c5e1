#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "saturn/errors.hpp"
#include "saturn/kernels.hpp"
#include "saturn/linalg.hpp"
#include "saturn/quadrature.hpp"

using namespace saturn;
using std::numbers::pi;

namespace {

PointSet random_sphere(std::mt19937_64 &rng, int n) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd c(3, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) c(k, i) = g(rng);
        c.col(i).normalize();
    }
    return {Domain::sphere_s2, c};
}

}  // namespace

TEST_CASE("kernel evaluation examples") {
    CHECK(Kernel::min_interval().evaluate(0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(Kernel::heavyside_interval().evaluate(0.3, 0.7) == doctest::Approx(0.09).epsilon(1e-15));
    const SpherePoint p(0.0, 0.6, 0.8);
    CHECK(Kernel::truncated_power(3).evaluate(p.span(), p.span()) == 1.0);
}

TEST_CASE("kernel ids round-trip") {
    for (const char *id : {"min", "heavyside", "truncpow3", "truncpow4"}) CHECK(Kernel::parse(id).name() == id);
    CHECK_THROWS_AS((void)Kernel::parse("rbf"), Error);
}

TEST_CASE("domain errors") {
    const Kernel k = Kernel::min_interval();
    CHECK_THROWS_AS((void)k.evaluate(-0.1, 0.5), Error);
    CHECK_THROWS_AS((void)k.evaluate(0.5, 1.5), Error);
    try {
        (void)k.evaluate(1.5, 0.5);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
    const double bad[3] = {1.0, 1e-2, 0.0};
    const double good[3] = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS((void)Kernel::truncated_power(3).evaluate(bad, good), Error);
    CHECK_THROWS_AS(SpherePoint(1.0, 0.1, 0.0), Error);
    CHECK_NOTHROW(SpherePoint(1.0 + 1e-13, 0.0, 0.0));
}

TEST_CASE("symmetry and kappa bound") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const Kernel &k : {Kernel::min_interval(), Kernel::heavyside_interval()}) {
        for (int t = 0; t < 200; ++t) {
            const double x = u(rng), y = u(rng);
            CHECK(k.evaluate(x, y) == k.evaluate(y, x));
            CHECK(std::abs(k.evaluate(x, y)) <= k.kappa_sq());
        }
    }
    const Kernel k = Kernel::truncated_power(4);
    const PointSet s = random_sphere(rng, 50);
    for (Eigen::Index i = 0; i + 1 < s.size(); ++i) {
        CHECK(k.evaluate(s.point(i), s.point(i + 1)) == k.evaluate(s.point(i + 1), s.point(i)));
        CHECK(k.evaluate(s.point(i), s.point(i + 1)) <= k.kappa_sq());
    }
}

TEST_CASE("Gram matrices are PSD on random designs") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> size(1, 32);
    for (int t = 0; t < 50; ++t) {
        const int n = size(rng);
        const auto xs = oracle::uniform_points(rng, n);
        for (const Kernel &k : {Kernel::min_interval(), Kernel::heavyside_interval()}) {
            CHECK(symmetric_eigenvalues(k.gram(PointSet::interval(xs))).minCoeff() >= -1e-9);
        }
        CHECK(symmetric_eigenvalues(Kernel::truncated_power(3).gram(random_sphere(rng, n))).minCoeff() >= -1e-9);
    }
}

TEST_CASE("cross and apply agree with direct evaluation") {
    std::mt19937_64 rng(5);
    const auto xs = oracle::uniform_points(rng, 40);
    auto zs = oracle::uniform_points(rng, 77);
    zs.push_back(0.0);
    zs.push_back(1.0);
    zs.push_back(xs[3]);
    const Eigen::MatrixXd v = Eigen::MatrixXd::Random(40, 3);
    for (const Kernel &k : {Kernel::min_interval(), Kernel::heavyside_interval()}) {
        const auto kf = [&](double a, double b) { return k.evaluate(a, b); };
        const Eigen::MatrixXd ref = oracle::gram(kf, xs, zs);
        CHECK((k.cross(PointSet::interval(zs), PointSet::interval(xs)) - ref).norm() == 0.0);
        const Eigen::MatrixXd got = k.apply(PointSet::interval(zs), PointSet::interval(xs), v);
        CHECK((got - ref * v).norm() <= 1e-12 * (ref * v).norm());
    }
    const Kernel k = Kernel::truncated_power(3);
    const PointSet sx = random_sphere(rng, 60);
    const Quadrature q = Quadrature::monte_carlo_sphere(3000, 9);
    const Eigen::MatrixXd w = Eigen::MatrixXd::Random(60, 2);
    const Eigen::MatrixXd ref = k.cross(q.nodes(), sx) * w;
    CHECK((k.apply(q.nodes(), sx, w) - ref).norm() <= 1e-12 * ref.norm());
}

TEST_CASE("eigen-system examples") {
    const EigenSystem m = eigen_system(Kernel::min_interval());
    CHECK(m.eigenvalue(1) == doctest::Approx(0.4052847).epsilon(1e-7));
    CHECK(m.eigenfunction(1, 0.3) == doctest::Approx(std::sqrt(2.0) * std::sin(pi * 0.3 / 2)).epsilon(1e-15));
    CHECK(m.beta() == 0.5);
    const EigenSystem h = eigen_system(Kernel::heavyside_interval());
    CHECK(h.eigenvalue(3) == doctest::Approx(1.0 / (9.0 * pi * pi)).epsilon(1e-15));
    CHECK(h.eigenfunction(3, 0.1) == doctest::Approx(std::sqrt(2.0) * std::sin(3 * pi * 0.1)).epsilon(1e-15));
    try {
        (void)eigen_system(Kernel::truncated_power(3));
        FAIL("expected unsupported");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::unsupported);
    }
}

TEST_CASE("Mercer partial sums") {
    const EigenSystem m = eigen_system(Kernel::min_interval());
    CHECK(m.mercer_partial_sum(1, 1.0, 1.0) == doctest::Approx(0.8105695).epsilon(1e-7));
    CHECK(m.mercer_partial_sum(7, 0.2, 0.9) == m.mercer_partial_sum(7, 0.9, 0.2));
    CHECK(std::abs(m.mercer_partial_sum(2000, 0.5, 0.5) - 0.5) <= 5e-4);
    for (const Kernel &k : {Kernel::min_interval(), Kernel::heavyside_interval()}) {
        const EigenSystem es = eigen_system(k);
        double worst = 0.0;
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 20; ++j) {
                const double x = i / 20.0, y = j / 20.0;
                worst = std::max(worst, std::abs(es.mercer_partial_sum(5000, x, y) - k.evaluate(x, y)));
            }
        CHECK(worst <= 1e-3);
    }
}

TEST_CASE("eigenfunctions are orthonormal under Simpson quadrature") {
    const Quadrature q = Quadrature::simpson(8193);
    for (const Kernel &k : {Kernel::min_interval(), Kernel::heavyside_interval()}) {
        const EigenSystem es = eigen_system(k);
        std::vector<Eigen::VectorXd> e;
        for (int i = 1; i <= 10; ++i) {
            Eigen::VectorXd v(q.size());
            for (Eigen::Index r = 0; r < q.size(); ++r) v(r) = es.eigenfunction(i, q.nodes().x(r));
            e.push_back(v);
        }
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const double ip = q.integrate(e[static_cast<std::size_t>(i)].cwiseProduct(e[static_cast<std::size_t>(j)]));
                worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
            }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("eigen-equation holds under Simpson quadrature") {
    for (const Kernel &k : {Kernel::min_interval(), Kernel::heavyside_interval()}) {
        const EigenSystem es = eigen_system(k);
        for (int i = 1; i <= 5; ++i) {
            for (int t = 0; t <= 10; ++t) {
                const double x = t / 10.0;
                // split at the kink y = x so Simpson sees smooth pieces
                const auto lhs = [&](double a, double b) {
                    return oracle::integrate([&](double u) {
                        const double y = a + (b - a) * u;
                        return (b - a) * k.evaluate(x, y) * es.eigenfunction(i, y);
                    }, 2001);
                };
                const double value = lhs(0.0, x) + lhs(x, 1.0);
                CHECK(std::abs(value - es.eigenvalue(i) * es.eigenfunction(i, x)) <= 1e-6);
            }
        }
    }
}

TEST_CASE("eigenvalue decay sandwich") {
    for (const Kernel &k : {Kernel::min_interval(), Kernel::heavyside_interval()}) {
        const EigenSystem es = eigen_system(k);
        const auto [c1, c2] = es.decay_constants();
        double prev = es.eigenvalue(1) * 2;
        for (int i = 1; i <= 10000; ++i) {
            const double li = es.eigenvalue(i);
            const double scaled = li * i * static_cast<double>(i);
            CHECK(li < prev);
            CHECK(scaled >= c1 * (1 - 1e-12));
            CHECK(scaled <= c2 * (1 + 1e-12));
            prev = li;
        }
    }
}

TEST_CASE("spherical harmonics") {
    CHECK(spherical_harmonic(1, 1, SpherePoint(1, 0, 0)) == doctest::Approx(0.4886025).epsilon(1e-7));
    CHECK(spherical_harmonic(3, 2, SpherePoint(0, 0, 1)) == 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(spherical_harmonic(2, -2, SpherePoint(r, r, 0)) == doctest::Approx(0.5462742).epsilon(1e-7));
    CHECK_THROWS_AS((void)spherical_harmonic(2, 1, SpherePoint(1, 0, 0)), Error);

    // unit L²(μ) norm after rescaling, checked against a Gauss-type product
    // rule in (cos θ, φ): Simpson in both coordinates
    for (auto [l, m] : {std::pair{1, 1}, std::pair{2, -2}, std::pair{3, 2}}) {
        std::vector<double> t, wt;
        oracle::simpson(401, t, wt);
        double s = 0.0;
        for (std::size_t a = 0; a < t.size(); ++a) {
            const double z = 2 * t[a] - 1, rho = std::sqrt(std::max(0.0, 1 - z * z));
            for (std::size_t b = 0; b < t.size(); ++b) {
                const double phi = 2 * pi * t[b];
                const double y = normalized_spherical_harmonic(l, m, SpherePoint(rho * std::cos(phi), rho * std::sin(phi), z));
                s += wt[a] * wt[b] * y * y;
            }
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
    }
}
