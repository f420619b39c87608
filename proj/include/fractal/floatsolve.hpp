#pragma once

#include <vector>

namespace fractal {

// Symmetric sparse matrix in triplet form; each off-diagonal pair is listed
// once (i < j) and mirrored implicitly. Diagonal entries listed with i == j.
struct SparseSym {
    int n = 0;
    std::vector<int> row, col;
    std::vector<double> val;

    void add(int i, int j, double v) {
        row.push_back(i);
        col.push_back(j);
        val.push_back(v);
    }
    std::vector<double> mul(const std::vector<double>& x) const;
};

struct FloatSolveResult {
    std::vector<double> x;
    double residual = 0.0;  // relative: ||Ax-b|| / ||b|| (2-norm), 0 when b == 0
};

// Solves an SPD system with a computed (never assumed) relative residual.
// Dense Cholesky with one step of iterative refinement up to `dense_limit`
// unknowns, Jacobi-preconditioned conjugate gradients beyond. Throws
// NoConvergence (carrying the achieved residual) if tol cannot be met.
FloatSolveResult solve_float(const SparseSym& a, const std::vector<double>& b, double tol,
                             int dense_limit = 4096);

// Dense SPD factorization, used directly where many right-hand sides share
// one matrix (Dirichlet solves, Schur complements, error-bound estimates).
class CholeskyDense {
public:
    explicit CholeskyDense(const SparseSym& a);
    int n() const { return n_; }
    std::vector<double> solve(const std::vector<double>& b) const;
    // Solve + one refinement pass against the original matrix.
    std::vector<double> solve_refined(const SparseSym& a, const std::vector<double>& b) const;
    // Hager-Higham style estimate of ||A^{-1}||_1 (= inf-norm by symmetry).
    double inv_norm_estimate() const;

private:
    int n_ = 0;
    std::vector<double> l_;  // row-major lower triangle, full n x n storage
};

double residual_rel(const SparseSym& a, const std::vector<double>& x, const std::vector<double>& b);

}  // namespace fractal
