#pragma once

#include <span>
#include <utility>
#include <vector>

#include "saturn/kernels.hpp"

namespace saturn {

/// f = Σ a_i e_i, a finite combination of eigenfunctions of one eigen-system.
class SourceFunction {
public:
    /// Throws ErrorKind::parameter for indices < 1.
    SourceFunction(EigenSystem eigsys, std::vector<std::pair<int, double>> terms);
    static SourceFunction eigenfunction(const EigenSystem &eigsys, int index) { return {eigsys, {{index, 1.0}}}; }

    [[nodiscard]] const EigenSystem &eigsys() const noexcept { return eigsys_; }
    [[nodiscard]] const std::vector<std::pair<int, double>> &terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept;

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double operator()(std::span<const double> x) const { return (*this)(x[0]); }

private:
    EigenSystem eigsys_;
    std::vector<std::pair<int, double>> terms_;
};

/// ‖f‖_{[H]^α} = (Σ a_i² λ_i^{-α})^{1/2}.
double interpolation_norm(const SourceFunction &f, double alpha);

/// N_p(λ) = Σ_i (λ_i/(λ_i + λ))^p. The series is summed exactly until its
/// next term drops below 1e-8 of the partial sum; the remainder is added from
/// the closed-form integral of the summand.
double effective_dimension(const EigenSystem &eigsys, double lambda, double p);

/// λ² Σ a_i² / (λ_i + λ)²  =  λ² ‖(T + λ)^{-1} f‖²_{L²}.
double population_bias_sq(const SourceFunction &f, double lambda);

/// (σ̄²/n) N_2(λ).
double population_variance_proxy(const EigenSystem &eigsys, double lambda, long n, double sigma_bar);

}  // namespace saturn
