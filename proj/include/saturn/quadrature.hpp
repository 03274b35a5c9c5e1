#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "saturn/points.hpp"

namespace saturn {

enum class QuadratureScheme { simpson_interval, monte_carlo_sphere };

/// Probability-weighted rule for integrals against μ (uniform on the domain).
class Quadrature {
public:
    static constexpr int default_simpson_nodes = 8193;
    static constexpr int default_mc_points = 200000;

    /// Composite Simpson on [0,1]; `nodes` must be odd and >= 3.
    static Quadrature simpson(int nodes = default_simpson_nodes);
    /// Equal-weight i.i.d. uniform points on S^2.
    static Quadrature monte_carlo_sphere(int points, std::uint64_t seed);

    [[nodiscard]] QuadratureScheme scheme() const noexcept { return scheme_; }
    [[nodiscard]] Domain domain() const noexcept { return nodes_.domain(); }
    [[nodiscard]] const PointSet &nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Eigen::VectorXd &weights() const noexcept { return weights_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return weights_.size(); }

    /// Σ w_i f_i for f sampled at the nodes.
    [[nodiscard]] double integrate(const Eigen::Ref<const Eigen::VectorXd> &values) const;
    /// Standard error of the Monte-Carlo estimate; 0 for deterministic rules.
    [[nodiscard]] double standard_error(const Eigen::Ref<const Eigen::VectorXd> &values) const;

private:
    Quadrature(QuadratureScheme s, PointSet nodes, Eigen::VectorXd w)
        : scheme_(s), nodes_(std::move(nodes)), weights_(std::move(w)) {}

    QuadratureScheme scheme_;
    PointSet nodes_;
    Eigen::VectorXd weights_;
};

/// Throws ErrorKind::configuration if `q` does not integrate over `d`.
void check_quadrature_domain(const Quadrature &q, Domain d);

}  // namespace saturn
