#pragma once

#include "chaintr/algebra/ring.hpp"

#include <vector>

namespace chaintr {

template <class S>
using Matrix = std::vector<std::vector<S>>;

// Solve A x = b by Gaussian elimination with largest-magnitude invertible pivots.
// Throws SolverError on a singular system.
template <class S>
std::vector<S> solve_linear(Matrix<S> A, std::vector<S> b) {
    using R = Ring<S>;
    const size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = n;
        double best = -1;
        for (size_t r = col; r < n; ++r) {
            if (!R::is_invertible(A[r][col]) || R::is_zero(A[r][col])) continue;
            double m = R::magnitude(A[r][col]);
            if (m > best) {
                best = m;
                piv = r;
            }
        }
        if (piv == n) throw SolverError("singular linear system");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        S inv = R::inv(A[col][col]);
        for (size_t r = col + 1; r < n; ++r) {
            if (R::is_exact_zero(A[r][col])) continue;
            S f = A[r][col] * inv;
            for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<S> x(n, from_int<S>(0));
    for (size_t i = n; i-- > 0;) {
        S acc = b[i];
        for (size_t c = i + 1; c < n; ++c) acc -= A[i][c] * x[c];
        x[i] = acc * R::inv(A[i][i]);
    }
    return x;
}

// Basis of the right nullspace of A (exact rings): reduced row echelon form.
template <class S>
std::vector<std::vector<S>> nullspace_exact(Matrix<S> A, size_t ncols) {
    using R = Ring<S>;
    std::vector<size_t> pivcols;
    size_t row = 0;
    for (size_t col = 0; col < ncols && row < A.size(); ++col) {
        size_t piv = A.size();
        for (size_t r = row; r < A.size(); ++r)
            if (R::is_invertible(A[r][col])) {
                piv = r;
                break;
            }
        if (piv == A.size()) continue;
        std::swap(A[piv], A[row]);
        S inv = R::inv(A[row][col]);
        for (auto& v : A[row]) v = v * inv;
        for (size_t r = 0; r < A.size(); ++r) {
            if (r == row || R::is_exact_zero(A[r][col])) continue;
            S f = A[r][col];
            for (size_t c = 0; c < ncols; ++c) A[r][c] -= f * A[row][c];
        }
        pivcols.push_back(col);
        ++row;
    }
    std::vector<bool> is_piv(ncols, false);
    for (auto c : pivcols) is_piv[c] = true;
    std::vector<std::vector<S>> basis;
    for (size_t free = 0; free < ncols; ++free) {
        if (is_piv[free]) continue;
        std::vector<S> v(ncols, from_int<S>(0));
        v[free] = from_int<S>(1);
        for (size_t k = 0; k < pivcols.size(); ++k) v[pivcols[k]] = -A[k][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Numerical nullspace of a complex matrix via SVD: singular vectors whose
// singular value is below rel_tol times the largest one.
std::vector<std::vector<Floating>> nullspace_svd(const Matrix<Floating>& A, size_t ncols, double rel_tol);

}  // namespace chaintr
