#include "em0/nnls.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace em0 {

std::vector<double> nnls(const std::vector<std::vector<double>>& X,
                         const std::vector<double>& y, double tolerance) {
    const size_t rows = X.size();
    if (rows == 0 || rows != y.size())
        throw std::invalid_argument("nnls: empty or mismatched inputs");
    const size_t cols = X[0].size();

    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (size_t r = 0; r < rows; ++r) {
        if (X[r].size() != cols)
            throw std::invalid_argument("nnls: ragged design matrix");
        for (size_t c = 0; c < cols; ++c) A(r, c) = X[r][c];
        b(r) = y[r];
    }

    if (tolerance < 0) {
        tolerance = 10 * std::numeric_limits<double>::epsilon() *
                    A.lpNorm<1>() * static_cast<double>(std::max(rows, cols));
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
    std::vector<bool> passive(cols, false);
    Eigen::VectorXd w = A.transpose() * (b - A * x);

    auto solve_passive = [&](Eigen::VectorXd& z) {
        std::vector<int> idx;
        for (size_t c = 0; c < cols; ++c)
            if (passive[c]) idx.push_back(static_cast<int>(c));
        Eigen::MatrixXd Ap(rows, idx.size());
        for (size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
        Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
        z.setZero(cols);
        for (size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(k);
    };

    const size_t max_outer = 3 * cols + 30;
    for (size_t outer = 0; outer < max_outer; ++outer) {
        int best = -1;
        double best_w = tolerance;
        for (size_t c = 0; c < cols; ++c) {
            if (!passive[c] && w(c) > best_w) {
                best_w = w(c);
                best = static_cast<int>(c);
            }
        }
        if (best < 0) break; // KKT satisfied
        passive[best] = true;

        Eigen::VectorXd z(cols);
        for (size_t inner = 0; inner < cols + 1; ++inner) {
            solve_passive(z);
            bool feasible = true;
            for (size_t c = 0; c < cols; ++c) {
                if (passive[c] && z(c) <= 0) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                x = z;
                break;
            }
            // Step toward z until the first coefficient hits zero.
            double alpha = std::numeric_limits<double>::infinity();
            for (size_t c = 0; c < cols; ++c) {
                if (passive[c] && z(c) <= 0) {
                    double a = x(c) / (x(c) - z(c));
                    alpha = std::min(alpha, a);
                }
            }
            x += alpha * (z - x);
            double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
            for (size_t c = 0; c < cols; ++c) {
                if (passive[c] && z(c) <= 0 && x(c) <= 1e-12 * scale) {
                    x(c) = 0;
                    passive[c] = false;
                }
            }
        }
        w = A.transpose() * (b - A * x);
    }

    return std::vector<double>(x.data(), x.data() + cols);
}

} // namespace em0
