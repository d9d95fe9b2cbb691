#include "raygeo/nnls.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "raygeo/errors.hpp"

namespace raygeo {

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     double tol, int max_iter) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const Eigen::Index m = A.rows(), n = A.cols();
    if (b.size() != m) throw MatrixError("nnls: rhs size mismatch");
    if (tol <= 0.0) {
        const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
        tol = 10.0 * std::numeric_limits<double>::epsilon() * scale *
              static_cast<double>(std::max(m, n));
    }
    if (max_iter < 0) max_iter = 10 * static_cast<int>(n) + 50;

    VectorXd x = VectorXd::Zero(n);
    std::vector<bool> in_passive(static_cast<std::size_t>(n), false);

    // Least squares restricted to the passive set; zeros elsewhere.
    auto restricted_lsq = [&]() {
        std::vector<Eigen::Index> pset;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (in_passive[static_cast<std::size_t>(j)]) pset.push_back(j);
        }
        VectorXd z = VectorXd::Zero(n);
        if (pset.empty()) return z;
        MatrixXd Ap(m, static_cast<Eigen::Index>(pset.size()));
        for (std::size_t c = 0; c < pset.size(); ++c) {
            Ap.col(static_cast<Eigen::Index>(c)) = A.col(pset[c]);
        }
        const VectorXd zp = Ap.colPivHouseholderQr().solve(b);
        for (std::size_t c = 0; c < pset.size(); ++c) {
            z[pset[c]] = zp[static_cast<Eigen::Index>(c)];
        }
        return z;
    };

    int iter = 0;
    while (iter < max_iter) {
        const VectorXd w = A.transpose() * (b - A * x);
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!in_passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) break;  // KKT conditions met
        in_passive[static_cast<std::size_t>(best)] = true;

        while (iter++ < max_iter) {
            const VectorXd z = restricted_lsq();
            double min_z = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (in_passive[static_cast<std::size_t>(j)]) min_z = std::min(min_z, z[j]);
            }
            if (!(min_z <= 0.0)) {  // also true when the passive set is empty
                x = z;
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (in_passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
                    alpha = std::min(alpha, x[j] / (x[j] - z[j]));
                }
            }
            if (!std::isfinite(alpha)) break;
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (in_passive[static_cast<std::size_t>(j)] && x[j] <= 1e-14) {
                    in_passive[static_cast<std::size_t>(j)] = false;
                    x[j] = 0.0;
                }
            }
        }
    }
    return x;
}

}  // namespace raygeo
