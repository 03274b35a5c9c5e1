#pragma once

#include <string_view>

#include <Eigen/Core>

#include "saturn/kernels.hpp"
#include "saturn/points.hpp"

namespace saturn {

enum class EigenSolver {
    automatic,    // tridiagonal for interval kernels on well-separated points, dense otherwise
    dense,        // LAPACK dsyevd on the full normalized Gram matrix
    tridiagonal,  // interval kernels only: dstemr on the tridiagonal inverse
};

std::string_view to_string(EigenSolver s) noexcept;
EigenSolver parse_eigen_solver(std::string_view id);

/// Symmetric eigendecomposition K = U diag(d) U' of the normalized Gram
/// matrix K = K(X,X)/n, eigenvalues ascending and clamped at 0.
struct GramSpectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    EigenSolver solver_used = EigenSolver::dense;

    [[nodiscard]] Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

/// Eigenvalues below -negative_eigenvalue_tolerance are a numeric error.
inline constexpr double negative_eigenvalue_tolerance = 1e-9;

GramSpectrum decompose_gram(const Kernel &kernel, const PointSet &x, EigenSolver solver = EigenSolver::automatic);

/// The same decomposition with U kept factored: for the dense path U = Q Z,
/// Q the Householder reflectors of a tridiagonal reduction and Z the
/// tridiagonal eigenvectors, so the O(n^3) back-transformation is never
/// formed. Products with U or U' cost O(n^2) per column.
class FactoredSpectrum {
public:
    explicit FactoredSpectrum(GramSpectrum explicit_spectrum);
    FactoredSpectrum(Eigen::MatrixXd reflectors, Eigen::VectorXd tau, Eigen::VectorXd eigenvalues, Eigen::MatrixXd z);

    [[nodiscard]] const Eigen::VectorXd &eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return eigenvalues_.size(); }
    [[nodiscard]] EigenSolver solver_used() const noexcept { return solver_; }

    /// U' v
    [[nodiscard]] Eigen::MatrixXd transpose_times(const Eigen::MatrixXd &v) const;
    /// U c
    [[nodiscard]] Eigen::MatrixXd times(const Eigen::MatrixXd &c) const;

private:
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd u_;  // explicit eigenvectors, or Z when reflectors are present
    Eigen::MatrixXd reflectors_;
    Eigen::VectorXd tau_;
    EigenSolver solver_ = EigenSolver::dense;
};

FactoredSpectrum decompose_gram_factored(const Kernel &kernel, const PointSet &x,
                                         EigenSolver solver = EigenSolver::automatic);

/// Ascending eigenvalues of a symmetric matrix (lower triangle referenced).
Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a);

/// Eigenpairs of a symmetric matrix, ascending.
void symmetric_eigen(Eigen::MatrixXd a, Eigen::VectorXd &values, Eigen::MatrixXd &vectors);

/// Limit BLAS threading when the caller parallelizes at a coarser level.
void set_blas_threads(int n);

}  // namespace saturn
