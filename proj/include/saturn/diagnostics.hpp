#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "saturn/estimators.hpp"
#include "saturn/kernels.hpp"
#include "saturn/linalg.hpp"
#include "saturn/quadrature.hpp"

namespace saturn {

/// Conditional (on X) risk of KRR split as E‖f̂ - f*‖² = bias_sq + variance.
struct BiasVarReport {
    double bias_sq = 0.0;
    double variance = 0.0;
    double total = 0.0;
    double lambda = 0.0;
    long n = 0;
};

/// KRR bias and variance given the design X, for homoscedastic noise σ̄:
///   bias_sq  = ‖f* - (1/n) K(·,X)(K + λ)^{-1} f*[X]‖²   ( = λ²‖(T_X+λ)^{-1} f*‖² )
///   variance = (σ̄²/n²) ∫ K(x,X)(K + λ)^{-2} K(X,x) dμ(x)
/// with both integrals taken under `quad`.
BiasVarReport empirical_bias_variance(const Kernel &kernel, const TargetFunction &f_star, const PointSet &x,
                                      double lambda, double sigma_bar, const Quadrature &quad,
                                      EigenSolver solver = EigenSolver::automatic);

/// Same, reusing a decomposition of K(X,X)/n.
BiasVarReport empirical_bias_variance(const Kernel &kernel, const GramSpectrum &spectrum,
                                      const TargetFunction &f_star, const PointSet &x, double lambda,
                                      double sigma_bar, const Quadrature &quad);

/// Averaged L² risk of KRR over `draws` Gaussian noise vectors with X fixed,
/// using a direct Cholesky solve of (K(X,X) + nλ) c = y. Returns (mean, standard error).
std::pair<double, double> monte_carlo_conditional_risk(const Kernel &kernel, const TargetFunction &f_star,
                                                       const PointSet &x, double lambda, double sigma_bar,
                                                       const Quadrature &quad, int draws, std::uint64_t seed);

/// ‖(T+λ)^{-1/2}(T - T_X)(T+λ)^{-1/2}‖ in the basis {√λ_i e_i} truncated to
/// eigsys.truncation_m() terms.
double operator_concentration_norm(const EigenSystem &eigsys, const PointSet &x, double lambda);

/// High-probability bound 4u/3 + √(2u) on the concentration norm, where
/// u = κ² ln(4(‖T‖+λ)N(λ)/(δ‖T‖)) / (λn) and N(λ) = N_1(λ).
struct ConcentrationBound {
    double u = 0.0;
    double bound = 0.0;
};
ConcentrationBound concentration_bound(const EigenSystem &eigsys, double kappa_sq, long n, double lambda,
                                       double delta);

/// For f = K(·,X) c returns (‖f‖²_{L²,n}, ⟨T_X f, f⟩_H): the first from
/// sampled values (1/n) f[X]'f[X], the second from sample-basis coefficients.
std::pair<double, double> sample_seminorm_check(const Kernel &kernel, const PointSet &x, const Eigen::VectorXd &c);

/// ‖(T+λ)^{-1} k(x,·)‖_{L²} from the truncated Mercer series.
double regularized_section_norm(const EigenSystem &eigsys, double x, double lambda);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick randomized invariant checks of the operator identities and bounds.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

}  // namespace saturn
