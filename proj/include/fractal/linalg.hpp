#pragma once

#include <vector>

#include "fractal/rat.hpp"

namespace fractal {

// Dense matrix of exact rationals. Row-major.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static RatMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rat& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rat& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    RatMatrix transpose() const;
    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
    RatMatrix scaled(const Rat& c) const;
    friend bool operator==(const RatMatrix& a, const RatMatrix& b);
    friend bool operator!=(const RatMatrix& a, const RatMatrix& b) { return !(a == b); }

    std::vector<Rat> mul_vec(const std::vector<Rat>& v) const;
    Rat row_sum(int i) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

// Solution of an integer linear system in scaled form: X = num / den exactly,
// with den > 0. Numerators are stored row-major, n rows by k columns.
struct ScaledSolution {
    std::vector<std::vector<BigInt>> num;
    BigInt den;
};

// Solves A X = B exactly over the integers by fraction-free Gauss-Jordan
// elimination (Montante/Bareiss). Pivot rule: among candidate rows, largest
// |entry| with lowest row index. Throws SingularMatrix on exact rank
// deficiency. a is n x n, b is n x k, both row-major.
ScaledSolution solve_int_exact(std::vector<std::vector<BigInt>> a,
                               std::vector<std::vector<BigInt>> b);

// Rational wrapper: rows of [A|B] are scaled by the lcm of their denominators
// first (the solution is unchanged), then solve_int_exact runs.
RatMatrix solve_exact(const RatMatrix& a, const RatMatrix& b);
ScaledSolution solve_exact_scaled(const RatMatrix& a, const RatMatrix& b);

Rat det_exact(const RatMatrix& a);

// Schur complement of a symmetric matrix onto the kept index set:
// L_kk - L_ki L_ii^{-1} L_ik, computed exactly. Throws SingularInterior when
// the eliminated block is singular.
RatMatrix schur_complement(const RatMatrix& l, const std::vector<int>& keep);

// Coefficients c of det(xI - A) = x^n + c[n-1] x^{n-1} + ... + c[0],
// by the Faddeev-LeVerrier recursion (exact; intended for small n).
std::vector<Rat> char_poly(const RatMatrix& a);

}  // namespace fractal
