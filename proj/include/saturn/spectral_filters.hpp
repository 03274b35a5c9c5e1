#pragma once

#include <string_view>

namespace saturn {

enum class FilterId { krr, gradient_flow, spectral_cutoff };

/// Stable ids used in configs and CSV: "krr", "gf", "cut".
std::string_view to_string(FilterId f) noexcept;
FilterId parse_filter(std::string_view id);

/// Regularization family g_λ applied to Gram eigenvalues t:
///   krr   g(t) = 1/(t + λ)
///   gf    g(t) = (1 - e^{-t/λ})/t   (gradient flow stopped at time 1/λ; g(0) = 1/λ)
///   cut   g(t) = 1/t if t >= λ else 0
struct SpectralFilter {
    FilterId id;

    /// Highest source smoothness the filter can exploit (krr 1, others ∞). Metadata only.
    [[nodiscard]] double qualification() const noexcept;
    [[nodiscard]] double value(double t, double lambda) const;
    /// r_λ(t) = 1 - t g_λ(t), in [0,1].
    [[nodiscard]] double residual(double t, double lambda) const;
};

/// Throws ErrorKind::parameter for λ <= 0 or t < 0.
double filter_value(FilterId f, double t, double lambda);
double residual_value(FilterId f, double t, double lambda);

}  // namespace saturn
