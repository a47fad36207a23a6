#include "chaintr/algebra/linalg.hpp"

#include <Eigen/Dense>

namespace chaintr {

std::vector<std::vector<Floating>> nullspace_svd(const Matrix<Floating>& A, size_t ncols, double rel_tol) {
    Eigen::MatrixXcd M(static_cast<Eigen::Index>(A.size()), static_cast<Eigen::Index>(ncols));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < ncols; ++j) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = A[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    std::vector<std::vector<Floating>> basis;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(ncols); ++k) {
        double s = k < sv.size() ? sv(k) : 0.0;
        if (s > rel_tol * smax) continue;
        std::vector<Floating> v(ncols);
        for (size_t j = 0; j < ncols; ++j) v[j] = svd.matrixV()(static_cast<Eigen::Index>(j), k);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace chaintr
