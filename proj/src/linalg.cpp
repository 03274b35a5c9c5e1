#include "saturn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <lapacke.h>

#include "saturn/errors.hpp"

extern "C" void openblas_set_num_threads(int num_threads);

namespace saturn {

using Eigen::Index;

std::string_view to_string(EigenSolver s) noexcept {
    switch (s) {
        case EigenSolver::automatic: return "auto";
        case EigenSolver::dense: return "dense";
        case EigenSolver::tridiagonal: return "tridiagonal";
    }
    return "?";
}

EigenSolver parse_eigen_solver(std::string_view id) {
    if (id == "auto") return EigenSolver::automatic;
    if (id == "dense") return EigenSolver::dense;
    if (id == "tridiagonal") return EigenSolver::tridiagonal;
    throw Error(ErrorKind::configuration, "unknown eigensolver '" + std::string(id) + "'");
}

void set_blas_threads(int n) { openblas_set_num_threads(std::max(1, n)); }

void symmetric_eigen(Eigen::MatrixXd a, Eigen::VectorXd &values, Eigen::MatrixXd &vectors) {
    const Index n = a.rows();
    if (a.cols() != n) throw Error(ErrorKind::parameter, "symmetric_eigen needs a square matrix");
    if (!a.allFinite()) throw Error(ErrorKind::numeric, "matrix has non-finite entries");
    values.resize(n);
    if (n == 0) {
        vectors.resize(0, 0);
        return;
    }
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n), a.data(),
                                           static_cast<lapack_int>(n), values.data());
    if (info != 0) throw Error(ErrorKind::numeric, "dsyevd failed with info " + std::to_string(info));
    vectors = std::move(a);
}

Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a) {
    const Index n = a.rows();
    if (a.cols() != n) throw Error(ErrorKind::parameter, "symmetric_eigenvalues needs a square matrix");
    if (!a.allFinite()) throw Error(ErrorKind::numeric, "matrix has non-finite entries");
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n), a.data(),
                                           static_cast<lapack_int>(n), w.data());
    if (info != 0) throw Error(ErrorKind::numeric, "dsyevd failed with info " + std::to_string(info));
    return w;
}

namespace {

void clamp_spectrum(Eigen::VectorXd &d) {
    for (Index i = 0; i < d.size(); ++i) {
        if (d(i) < 0.0) {
            if (d(i) < -negative_eigenvalue_tolerance) {
                throw Error(ErrorKind::numeric, "Gram matrix has eigenvalue " + std::to_string(d(i)) +
                                                    " below the PSD tolerance");
            }
            d(i) = 0.0;
        }
    }
}

GramSpectrum dense_spectrum(const Kernel &kernel, const PointSet &x) {
    const auto n = static_cast<double>(x.size());
    GramSpectrum s;
    symmetric_eigen(kernel.gram(x) / n, s.eigenvalues, s.eigenvectors);
    clamp_spectrum(s.eigenvalues);
    s.solver_used = EigenSolver::dense;
    return s;
}

// For sorted 0 < x_1 < ... < x_n the Gram matrix of min(x,y) (Brownian motion)
// and of min(x,y)(1 - max(x,y)) (Brownian bridge) has a tridiagonal inverse
//   J_ii = 1/g_i + 1/g_{i+1},  J_{i,i+1} = -1/g_{i+1},  g_i = x_i - x_{i-1}, x_0 = 0,
// where for motion the last diagonal is 1/g_n and for the bridge g_{n+1} = 1 - x_n.
// Returns false when the gaps degenerate (repeated points, x = 0, or x = 1 for the bridge).
bool tridiagonal_inverse(const Kernel &kernel, const std::vector<double> &xs, std::vector<double> &diag,
                         std::vector<double> &off) {
    const std::size_t n = xs.size();
    diag.assign(n, 0.0);
    off.assign(n, 0.0);  // dstemr uses the last slot as workspace
    std::vector<double> inv_gap(n + 1, 0.0);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = xs[i] - prev;
        if (!(g > 0.0)) return false;
        inv_gap[i] = 1.0 / g;
        prev = xs[i];
    }
    const bool bridge = kernel.id() == KernelId::heavyside_interval;
    if (bridge) {
        const double g = 1.0 - xs[n - 1];
        if (!(g > 0.0)) return false;
        inv_gap[n] = 1.0 / g;
    }
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = inv_gap[i] + inv_gap[i + 1];
        if (i + 1 < n) off[i] = -inv_gap[i + 1];
    }
    for (double v : inv_gap)
        if (!std::isfinite(v)) return false;
    return true;
}

bool tridiagonal_spectrum(const Kernel &kernel, const PointSet &x, GramSpectrum &out) {
    const Index n = x.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return x.x(a) < x.x(b); });
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = x.x(order[static_cast<std::size_t>(i)]);

    std::vector<double> diag, off;
    if (!tridiagonal_inverse(kernel, xs, diag, off)) return false;

    std::vector<double> w(static_cast<std::size_t>(n));
    Eigen::MatrixXd z(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    const lapack_int info =
        LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', static_cast<lapack_int>(n), diag.data(), off.data(), 0.0, 0.0, 0,
                       0, &found, w.data(), z.data(), static_cast<lapack_int>(n), static_cast<lapack_int>(n),
                       support.data(), &tryrac);
    if (info != 0 || found != n) return false;

    // J ascending => K = (1/n) J^{-1} descending; reverse to ascending order
    // and undo the sort on the rows.
    const auto nn = static_cast<double>(n);
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = n - 1 - k;
        const double wk = w[static_cast<std::size_t>(src)];
        if (!(wk > 0.0) || !std::isfinite(wk)) return false;
        out.eigenvalues(k) = 1.0 / (nn * wk);
        for (Index r = 0; r < n; ++r) out.eigenvectors(order[static_cast<std::size_t>(r)], k) = z(r, src);
    }
    out.solver_used = EigenSolver::tridiagonal;
    return true;
}

}  // namespace

GramSpectrum decompose_gram(const Kernel &kernel, const PointSet &x, EigenSolver solver) {
    if (x.empty()) throw Error(ErrorKind::empty_data, "cannot decompose the Gram matrix of an empty design");
    if (x.domain() != kernel.domain()) {
        throw Error(ErrorKind::configuration, "design points do not match the kernel domain");
    }
    if (solver == EigenSolver::tridiagonal && !kernel.is_interval_markov()) {
        throw Error(ErrorKind::configuration, "tridiagonal eigensolver requires an interval kernel");
    }
    if (solver != EigenSolver::dense && kernel.is_interval_markov()) {
        GramSpectrum s;
        if (tridiagonal_spectrum(kernel, x, s)) return s;
        if (solver == EigenSolver::tridiagonal) {
            throw Error(ErrorKind::numeric, "tridiagonal eigensolver failed (degenerate design)");
        }
    }
    return dense_spectrum(kernel, x);
}

FactoredSpectrum::FactoredSpectrum(GramSpectrum explicit_spectrum)
    : eigenvalues_(std::move(explicit_spectrum.eigenvalues)),
      u_(std::move(explicit_spectrum.eigenvectors)),
      solver_(explicit_spectrum.solver_used) {}

FactoredSpectrum::FactoredSpectrum(Eigen::MatrixXd reflectors, Eigen::VectorXd tau, Eigen::VectorXd eigenvalues,
                                   Eigen::MatrixXd z)
    : eigenvalues_(std::move(eigenvalues)), u_(std::move(z)), reflectors_(std::move(reflectors)), tau_(std::move(tau)) {}

namespace {

void apply_reflectors(const Eigen::MatrixXd &a, const Eigen::VectorXd &tau, char trans, Eigen::MatrixXd &c) {
    if (c.cols() == 0 || a.rows() < 2) return;
    const lapack_int info = LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', trans, static_cast<lapack_int>(c.rows()),
                                           static_cast<lapack_int>(c.cols()), a.data(),
                                           static_cast<lapack_int>(a.rows()), tau.data(), c.data(),
                                           static_cast<lapack_int>(c.rows()));
    if (info != 0) throw Error(ErrorKind::numeric, "dormtr failed with info " + std::to_string(info));
}

}  // namespace

Eigen::MatrixXd FactoredSpectrum::transpose_times(const Eigen::MatrixXd &v) const {
    if (v.rows() != size()) throw Error(ErrorKind::parameter, "transpose_times: row count does not match");
    if (reflectors_.size() == 0) return u_.transpose() * v;
    Eigen::MatrixXd w = v;
    apply_reflectors(reflectors_, tau_, 'T', w);
    return u_.transpose() * w;
}

Eigen::MatrixXd FactoredSpectrum::times(const Eigen::MatrixXd &c) const {
    if (c.rows() != size()) throw Error(ErrorKind::parameter, "times: row count does not match");
    Eigen::MatrixXd w = u_ * c;
    if (reflectors_.size() != 0) apply_reflectors(reflectors_, tau_, 'N', w);
    return w;
}

FactoredSpectrum decompose_gram_factored(const Kernel &kernel, const PointSet &x, EigenSolver solver) {
    if (solver != EigenSolver::dense && kernel.is_interval_markov()) {
        return FactoredSpectrum(decompose_gram(kernel, x, solver));
    }
    if (x.empty()) throw Error(ErrorKind::empty_data, "cannot decompose the Gram matrix of an empty design");
    if (x.domain() != kernel.domain()) {
        throw Error(ErrorKind::configuration, "design points do not match the kernel domain");
    }
    const Index n = x.size();
    Eigen::MatrixXd a = kernel.gram(x) / static_cast<double>(n);
    Eigen::VectorXd diag(n), off(std::max<Index>(n, 1)), tau(std::max<Index>(n - 1, 1));
    lapack_int info = LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n), a.data(),
                                     static_cast<lapack_int>(n), diag.data(), off.data(), tau.data());
    if (info != 0) throw Error(ErrorKind::numeric, "dsytrd failed with info " + std::to_string(info));

    Eigen::VectorXd w(n);
    Eigen::MatrixXd z(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', static_cast<lapack_int>(n), diag.data(), off.data(), 0.0, 0.0,
                          0, 0, &found, w.data(), z.data(), static_cast<lapack_int>(n), static_cast<lapack_int>(n),
                          support.data(), &tryrac);
    if (info != 0 || found != n) {
        throw Error(ErrorKind::numeric, "dstemr failed with info " + std::to_string(info));
    }
    clamp_spectrum(w);
    return FactoredSpectrum(std::move(a), std::move(tau), std::move(w), std::move(z));
}

}  // namespace saturn
