#include "saturn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>

#include "saturn/errors.hpp"
#include "saturn/rkhs_analysis.hpp"

namespace saturn {

using Eigen::Index;

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(ErrorKind::parameter, "lambda must be positive, got " + std::to_string(lambda));
}

// q_k = Σ_z w_z (K(z,X) V)_{zk}^2 for every column k of V.
Eigen::VectorXd weighted_column_energy(const Kernel &kernel, const Quadrature &quad, const PointSet &x,
                                       const Eigen::MatrixXd &v) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(v.cols());
    const Eigen::VectorXd &w = quad.weights();
    if (kernel.is_interval_markov()) {
        constexpr Index block = 256;
        for (Index start = 0; start < v.cols(); start += block) {
            const Index cols = std::min(block, v.cols() - start);
            const Eigen::MatrixXd f = kernel.apply(quad.nodes(), x, v.middleCols(start, cols));
            q.segment(start, cols) = (f.array().square().colwise() * w.array()).colwise().sum().transpose();
        }
        return q;
    }
    constexpr Index block = 512;
    const PointSet &z = quad.nodes();
    for (Index start = 0; start < z.size(); start += block) {
        const Index rows = std::min(block, z.size() - start);
        const PointSet zs(z.domain(), z.coords().middleCols(start, rows));
        const Eigen::MatrixXd f = kernel.apply(zs, x, v);
        q += (f.array().square().colwise() * w.segment(start, rows).array()).colwise().sum().transpose().matrix();
    }
    return q;
}

}  // namespace

BiasVarReport empirical_bias_variance(const Kernel &kernel, const GramSpectrum &spectrum,
                                      const TargetFunction &f_star, const PointSet &x, double lambda,
                                      double sigma_bar, const Quadrature &quad) {
    check_lambda(lambda);
    if (x.empty()) throw Error(ErrorKind::empty_data, "design is empty");
    if (!(sigma_bar >= 0.0)) throw Error(ErrorKind::parameter, "noise level must be nonnegative");
    check_quadrature_domain(quad, kernel.domain());
    const Index n = x.size();
    const auto nd = static_cast<double>(n);
    const Eigen::MatrixXd &u = spectrum.eigenvectors;
    const Eigen::ArrayXd resolvent = 1.0 / (spectrum.eigenvalues.array() + lambda);

    // λ(T_X+λ)^{-1} f* = f* - (1/n) K(·,X)(K+λ)^{-1} f*[X]
    const Eigen::VectorXd fx = sample(f_star, x);
    const Eigen::VectorXd coef = u * (resolvent * (u.transpose() * fx).array()).matrix() / nd;
    const Eigen::VectorXd residual = sample(f_star, quad.nodes()) - kernel.apply(quad.nodes(), x, coef);

    BiasVarReport r;
    r.lambda = lambda;
    r.n = static_cast<long>(n);
    r.bias_sq = quad.integrate(residual.array().square().matrix());
    const Eigen::VectorXd energy = weighted_column_energy(kernel, quad, x, u);
    r.variance = sigma_bar * sigma_bar / (nd * nd) * (energy.array() * resolvent.square()).sum();
    r.total = r.bias_sq + r.variance;
    return r;
}

BiasVarReport empirical_bias_variance(const Kernel &kernel, const TargetFunction &f_star, const PointSet &x,
                                      double lambda, double sigma_bar, const Quadrature &quad, EigenSolver solver) {
    check_lambda(lambda);
    return empirical_bias_variance(kernel, decompose_gram(kernel, x, solver), f_star, x, lambda, sigma_bar, quad);
}

std::pair<double, double> monte_carlo_conditional_risk(const Kernel &kernel, const TargetFunction &f_star,
                                                       const PointSet &x, double lambda, double sigma_bar,
                                                       const Quadrature &quad, int draws, std::uint64_t seed) {
    check_lambda(lambda);
    if (draws < 2) throw Error(ErrorKind::parameter, "need at least 2 Monte-Carlo draws");
    check_quadrature_domain(quad, kernel.domain());
    const Index n = x.size();
    Eigen::MatrixXd a = kernel.gram(x);
    a.diagonal().array() += static_cast<double>(n) * lambda;
    const Eigen::LLT<Eigen::MatrixXd> chol(a);
    if (chol.info() != Eigen::Success) throw Error(ErrorKind::numeric, "Cholesky of K + n lambda failed");

    const Eigen::VectorXd fx = sample(f_star, x);
    const Eigen::VectorXd fz = sample(f_star, quad.nodes());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;

    constexpr int chunk = 500;
    double sum = 0.0, sum_sq = 0.0;
    for (int done = 0; done < draws; done += chunk) {
        const int m = std::min(chunk, draws - done);
        Eigen::MatrixXd y(n, m);
        for (int j = 0; j < m; ++j)
            for (Index i = 0; i < n; ++i) y(i, j) = fx(i) + sigma_bar * normal(rng);
        const Eigen::MatrixXd c = chol.solve(y);
        const Eigen::MatrixXd pred = kernel.apply(quad.nodes(), x, c);
        for (int j = 0; j < m; ++j) {
            const double e = quad.integrate((pred.col(j) - fz).array().square().matrix());
            sum += e;
            sum_sq += e * e;
        }
    }
    const double mean = sum / draws;
    const double var = std::max(0.0, (sum_sq - draws * mean * mean) / (draws - 1));
    return {mean, std::sqrt(var / draws)};
}

double operator_concentration_norm(const EigenSystem &eigsys, const PointSet &x, double lambda) {
    check_lambda(lambda);
    if (x.empty()) throw Error(ErrorKind::empty_data, "design is empty");
    if (x.domain() != Domain::unit_interval) throw Error(ErrorKind::configuration, "design must be on [0,1]");
    const int m = eigsys.truncation_m();
    const Index n = x.size();
    Eigen::VectorXd s(m);
    for (int i = 0; i < m; ++i) {
        const double li = eigsys.eigenvalue(i + 1);
        s(i) = std::sqrt(li / (li + lambda));
    }
    // M = S (I - E E'/n) S = S² - F F',  F = S E / √n,  E_ik = e_i(x_k)
    Eigen::MatrixXd f(m, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index k = 0; k < n; ++k) {
        const double xk = x.x(k);
        for (int i = 0; i < m; ++i) f(i, k) = s(i) * scale * eigsys.eigenfunction(i + 1, xk);
    }
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, m);
    mat.diagonal() = s.array().square().matrix();
    mat.selfadjointView<Eigen::Lower>().rankUpdate(f, -1.0);
    const Eigen::VectorXd ev = symmetric_eigenvalues(std::move(mat));
    return std::max(std::abs(ev(0)), std::abs(ev(m - 1)));
}

ConcentrationBound concentration_bound(const EigenSystem &eigsys, double kappa_sq, long n, double lambda,
                                       double delta) {
    check_lambda(lambda);
    if (n < 1) throw Error(ErrorKind::parameter, "sample size must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::parameter, "delta must lie in (0,1)");
    const double op = eigsys.operator_norm();
    const double big_n = effective_dimension(eigsys, lambda, 1.0);
    const double b = std::log(4.0 * (op + lambda) * big_n / (delta * op));
    ConcentrationBound out;
    out.u = kappa_sq * b / (lambda * static_cast<double>(n));
    out.bound = 4.0 * out.u / 3.0 + std::sqrt(2.0 * out.u);
    return out;
}

std::pair<double, double> sample_seminorm_check(const Kernel &kernel, const PointSet &x, const Eigen::VectorXd &c) {
    if (c.size() != x.size()) throw Error(ErrorKind::parameter, "coefficient vector does not match the design");
    const auto n = static_cast<double>(x.size());
    // f[X] by evaluating f = K(·,X)c at the design points
    const Eigen::VectorXd fx = kernel.apply(x, x, c);
    const double empirical = fx.squaredNorm() / n;
    // T_X f = K(·,X)(K c) with K = K(X,X)/n; <K(·,X)a, K(·,X)b>_H = a' K(X,X) b
    const Eigen::MatrixXd g = kernel.gram(x);
    const Eigen::VectorXd txf = g * c / n;
    const double rkhs = txf.dot(g * c);
    return {empirical, rkhs};
}

double regularized_section_norm(const EigenSystem &eigsys, double x, double lambda) {
    check_lambda(lambda);
    double s = 0.0;
    for (int i = eigsys.truncation_m(); i >= 1; --i) {
        const double li = eigsys.eigenvalue(i);
        const double r = li / (li + lambda) * eigsys.eigenfunction(i, x);
        s += r * r;
    }
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------

namespace {

PointSet uniform_design(std::mt19937_64 &rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd m(1, n);
    for (int i = 0; i < n; ++i) m(0, i) = u(rng);
    return {Domain::unit_interval, std::move(m)};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed);
    const Kernel kmin = Kernel::min_interval();
    const Kernel khs = Kernel::heavyside_interval();
    const EigenSystem emin = eigen_system(kmin);
    const EigenSystem ehs = eigen_system(khs);
    const Quadrature quad = Quadrature::simpson(2049);
    const SourceFunction e2 = SourceFunction::eigenfunction(emin, 2);
    const TargetFunction f2 = [&](std::span<const double> p) { return e2(p); };

    {
        // bias + variance against the noise-averaged risk
        const PointSet x = uniform_design(rng, 10);
        const auto r = empirical_bias_variance(kmin, f2, x, 0.1, 0.2, quad);
        const auto [mean, se] = monte_carlo_conditional_risk(kmin, f2, x, 0.1, 0.2, quad, 4000, rng());
        const bool ok = std::abs(r.total - mean) <= 4.0 * se;
        out.push_back({"bias_variance_decomposition", ok,
                       "closed form " + fmt(r.total) + " vs MC " + fmt(mean) + " +- " + fmt(se)});
        const bool sum_ok = std::abs(r.total - (r.bias_sq + r.variance)) <= 1e-12 * r.total;
        out.push_back({"report_total_is_sum", sum_ok, fmt(r.total)});
    }
    {
        // spectral KRR against the direct solve of (K + nλ)c = y
        const PointSet x = uniform_design(rng, 24);
        std::normal_distribution<double> normal;
        Eigen::VectorXd y(24);
        for (Index i = 0; i < 24; ++i) y(i) = e2(x.x(i)) + 0.2 * normal(rng);
        const double lambda = 1e-3;
        const auto reg = fit(kmin, FilterId::krr, Dataset(x, y, 0.2), lambda);
        Eigen::MatrixXd a = kmin.gram(x);
        a.diagonal().array() += 24 * lambda;
        const Eigen::VectorXd c = a.llt().solve(y);
        const double rel = (reg.dual_coefficients() - c).norm() / c.norm();
        out.push_back({"krr_spectral_equals_linear_solve", rel <= 1e-9, "relative gap " + fmt(rel)});
    }
    {
        const PointSet x = uniform_design(rng, 8);
        std::normal_distribution<double> normal;
        Eigen::VectorXd c(8);
        for (Index i = 0; i < 8; ++i) c(i) = normal(rng);
        const auto [lhs, rhs] = sample_seminorm_check(khs, x, c);
        const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
        out.push_back({"sample_seminorm_identity", rel <= 1e-10, "relative gap " + fmt(rel)});
    }
    {
        const PointSet x = uniform_design(rng, 64);
        const GramSpectrum spec = decompose_gram(kmin, x);
        double prev = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (double lambda : {1e-4, 1e-3, 1e-2, 1e-1}) {
            const double v = empirical_bias_variance(kmin, spec, f2, x, lambda, 1.0, quad).variance;
            ok = ok && v <= prev;
            prev = v;
        }
        out.push_back({"variance_nonincreasing_in_lambda", ok, ""});
    }
    {
        bool ok = true;
        double worst = 0.0;
        const auto e = emin.with_truncation(2000);
        for (double lambda : {1e-3, 1e-2}) {
            const double bound = std::sqrt(kmin.kappa_sq() / lambda);
            for (int k = 0; k <= 10; ++k) {
                const double v = regularized_section_norm(e, k / 10.0, lambda);
                worst = std::max(worst, v / bound);
                ok = ok && v <= bound;
            }
        }
        out.push_back({"regularized_section_norm_bound", ok, "max ratio to bound " + fmt(worst)});
    }
    {
        const int n = 512, runs = 20;
        const double lambda = 1.0 / std::sqrt(static_cast<double>(n));
        const auto e = ehs.with_truncation(500);
        const double bound = concentration_bound(e, khs.kappa_sq(), n, lambda, 0.05).bound;
        int covered = 0;
        for (int r = 0; r < runs; ++r)
            if (operator_concentration_norm(e, uniform_design(rng, n), lambda) <= bound) ++covered;
        out.push_back({"concentration_bound_coverage", covered >= 18,
                       std::to_string(covered) + "/" + std::to_string(runs) + " within " + fmt(bound)});
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const PointSet x = uniform_design(rng, 32);
            const Eigen::VectorXd ev = symmetric_eigenvalues(khs.gram(x));
            worst = std::min(worst, ev(0));
        }
        out.push_back({"gram_psd", worst >= -1e-9, "min eigenvalue " + fmt(worst)});
    }
    {
        double brute = 0.0;
        for (long i = 1000000; i >= 1; --i) {
            const double r = 1.0 / (1.0 + static_cast<double>(i) * static_cast<double>(i));
            brute += r * r;
        }
        const double nd = effective_dimension(ehs, 1.0 / (std::numbers::pi * std::numbers::pi), 2.0);
        out.push_back({"effective_dimension_series", std::abs(nd - brute) <= 1e-8, fmt(nd) + " vs " + fmt(brute)});
    }
    return out;
}

}  // namespace saturn
