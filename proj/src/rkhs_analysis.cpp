#include "saturn/rkhs_analysis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "saturn/errors.hpp"

namespace saturn {

SourceFunction::SourceFunction(EigenSystem eigsys, std::vector<std::pair<int, double>> terms)
    : eigsys_(eigsys), terms_(std::move(terms)) {
    for (const auto &[i, a] : terms_) {
        if (i < 1) throw Error(ErrorKind::parameter, "eigenfunction index must be >= 1, got " + std::to_string(i));
        if (!std::isfinite(a)) throw Error(ErrorKind::parameter, "non-finite source coefficient");
    }
}

bool SourceFunction::is_zero() const noexcept {
    for (const auto &[i, a] : terms_)
        if (a != 0.0) return false;
    return true;
}

double SourceFunction::operator()(double x) const {
    double s = 0.0;
    for (const auto &[i, a] : terms_) s += a * eigsys_.eigenfunction(i, x);
    return s;
}

double interpolation_norm(const SourceFunction &f, double alpha) {
    if (!(alpha >= 0.0)) throw Error(ErrorKind::parameter, "alpha must be nonnegative");
    double s = 0.0;
    for (const auto &[i, a] : f.terms()) s += a * a * std::pow(f.eigsys().eigenvalue(i), -alpha);
    return std::sqrt(s);
}

namespace {

// ∫_{x0}^∞ (1 + λ ω(x)²)^{-p} dx with ω(x) = π (x - s). Substituting
// u = π √λ (x - s) and w = 1/(1 + u²) gives (1/(2π√λ)) B(w0; p - 1/2, 1/2).
double summand_tail_integral(const EigenSystem &e, double lambda, double p, double x0) {
    const double u0 = std::sqrt(lambda) * e.frequency(x0);
    const double w0 = 1.0 / (1.0 + u0 * u0);
    return boost::math::beta(p - 0.5, 0.5, w0) / (2.0 * std::numbers::pi * std::sqrt(lambda));
}

}  // namespace

double effective_dimension(const EigenSystem &eigsys, double lambda, double p) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(ErrorKind::parameter, "lambda must be positive, got " + std::to_string(lambda));
    if (!(p >= 1.0)) throw Error(ErrorKind::parameter, "effective dimension needs p >= 1");
    constexpr double rel_tol = 1e-8;
    constexpr long max_terms = 200'000'000;

    double sum = 0.0;
    long i = 1;
    for (;; ++i) {
        const double w = eigsys.frequency(static_cast<double>(i));
        const double term = std::pow(1.0 / (1.0 + lambda * w * w), p);
        sum += term;
        // Σ_{j>i} term_j lies within [∫_{i+1}^∞, ∫_i^∞], an interval of width <= term_i.
        if (term <= rel_tol * sum) break;
        if (i >= max_terms) throw Error(ErrorKind::numeric, "effective dimension series did not converge");
    }
    // Midpoint estimate of the remainder.
    return sum + summand_tail_integral(eigsys, lambda, p, static_cast<double>(i) + 0.5);
}

double population_bias_sq(const SourceFunction &f, double lambda) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::parameter, "lambda must be positive");
    double s = 0.0;
    for (const auto &[i, a] : f.terms()) {
        const double r = a / (f.eigsys().eigenvalue(i) + lambda);
        s += r * r;
    }
    return lambda * lambda * s;
}

double population_variance_proxy(const EigenSystem &eigsys, double lambda, long n, double sigma_bar) {
    if (n < 1) throw Error(ErrorKind::parameter, "sample size must be >= 1");
    if (!(sigma_bar > 0.0)) throw Error(ErrorKind::parameter, "noise level must be positive");
    return sigma_bar * sigma_bar / static_cast<double>(n) * effective_dimension(eigsys, lambda, 2.0);
}

}  // namespace saturn
