#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace iddm {

using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LanczosOptions {
    int krylov_dimension{120};  // basis size before an explicit restart
    int max_restarts{200};
    double tolerance{1e-9};     // residual norm |H v - theta v|
};

struct EigenPair {
    double value{0.0};
    Eigen::VectorXd vector;
    double residual{0.0};
    int matvecs{0};
    bool converged{false};
};

/// Lowest eigenpair of a real symmetric operator by restarted Lanczos with full
/// reorthogonalization. The start vector is the normalized all-ones vector, so
/// repeated calls are bit-identical.
EigenPair lowest_eigenpair(const SparseOperator& h, const LanczosOptions& options = {});

}  // namespace iddm
