#include "saturn/spectral_filters.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "saturn/errors.hpp"

namespace saturn {

std::string_view to_string(FilterId f) noexcept {
    switch (f) {
        case FilterId::krr: return "krr";
        case FilterId::gradient_flow: return "gf";
        case FilterId::spectral_cutoff: return "cut";
    }
    return "?";
}

FilterId parse_filter(std::string_view id) {
    if (id == "krr") return FilterId::krr;
    if (id == "gf") return FilterId::gradient_flow;
    if (id == "cut") return FilterId::spectral_cutoff;
    throw Error(ErrorKind::configuration, "unknown algorithm '" + std::string(id) + "' (expected krr, gf or cut)");
}

namespace {

void check_args(double t, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(ErrorKind::parameter, "regularization parameter must be positive, got " + std::to_string(lambda));
    if (!(t >= 0.0)) throw Error(ErrorKind::parameter, "filter argument must be nonnegative, got " + std::to_string(t));
}

}  // namespace

double filter_value(FilterId f, double t, double lambda) {
    check_args(t, lambda);
    switch (f) {
        case FilterId::krr: return 1.0 / (t + lambda);
        case FilterId::gradient_flow:
            if (t == 0.0) return 1.0 / lambda;
            return -std::expm1(-t / lambda) / t;
        case FilterId::spectral_cutoff: return t >= lambda ? 1.0 / t : 0.0;
    }
    return 0.0;
}

double residual_value(FilterId f, double t, double lambda) {
    check_args(t, lambda);
    switch (f) {
        case FilterId::krr: return lambda / (t + lambda);
        case FilterId::gradient_flow: return std::exp(-t / lambda);
        case FilterId::spectral_cutoff: return t >= lambda ? 0.0 : 1.0;
    }
    return 1.0;
}

double SpectralFilter::qualification() const noexcept {
    return id == FilterId::krr ? 1.0 : std::numeric_limits<double>::infinity();
}

double SpectralFilter::value(double t, double lambda) const { return filter_value(id, t, lambda); }
double SpectralFilter::residual(double t, double lambda) const { return residual_value(id, t, lambda); }

}  // namespace saturn
