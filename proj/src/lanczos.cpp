#include "iddm/lanczos.hpp"

#include <algorithm>
#include <cmath>

#include "iddm/errors.hpp"

namespace iddm {

EigenPair lowest_eigenpair(const SparseOperator& h, const LanczosOptions& options) {
    const Eigen::Index n = h.rows();
    if (n == 0 || h.cols() != n) {
        throw Error(ErrorKind::InvalidParameter, "Lanczos needs a nonempty square operator");
    }
    const Eigen::Index m = std::min<Eigen::Index>(std::max(options.krylov_dimension, 2), n);

    EigenPair out;
    Eigen::VectorXd start = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    Eigen::MatrixXd basis(n, m);
    Eigen::VectorXd diag(m);
    Eigen::VectorXd offdiag(m);

    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        basis.col(0) = start;
        for (Eigen::Index j = 0; j < m; ++j) {
            Eigen::VectorXd w = h * basis.col(j);
            ++out.matvecs;
            diag[j] = basis.col(j).dot(w);
            // Full reorthogonalization, applied twice.
            for (int pass = 0; pass < 2; ++pass) {
                const Eigen::VectorXd overlaps = basis.leftCols(j + 1).transpose() * w;
                w.noalias() -= basis.leftCols(j + 1) * overlaps;
            }
            const double b = w.norm();
            const Eigen::Index k = j + 1;

            const bool exhausted = (k == m);
            const bool breakdown = b <= 1e-14 * std::max(1.0, std::abs(diag[j]));
            if (exhausted || breakdown || k % 8 == 0) {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
                tri.computeFromTridiagonal(diag.head(k), offdiag.head(std::max<Eigen::Index>(k - 1, 0)),
                                           Eigen::ComputeEigenvectors);
                const Eigen::VectorXd s = tri.eigenvectors().col(0);
                const double estimate = b * std::abs(s[k - 1]);
                if (exhausted || breakdown || estimate <= options.tolerance) {
                    Eigen::VectorXd ritz = basis.leftCols(k) * s;
                    ritz.normalize();
                    const double theta = tri.eigenvalues()[0];
                    const double residual = (h * ritz - theta * ritz).norm();
                    ++out.matvecs;
                    out.value = theta;
                    out.vector = ritz;
                    out.residual = residual;
                    if (residual <= options.tolerance) {
                        out.converged = true;
                        return out;
                    }
                    if (exhausted || breakdown) {
                        start = ritz;
                        break;
                    }
                }
            }
            offdiag[j] = b;
            basis.col(j + 1) = w / b;
        }
    }
    return out;
}

}  // namespace iddm
