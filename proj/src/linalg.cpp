#include "fractal/linalg.hpp"

#include <utility>

#include "fractal/errors.hpp"

namespace fractal {

RatMatrix RatMatrix::identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rat(1);
    return m;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_) throw InternalError("RatMatrix multiply: dimension mismatch");
    RatMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
        for (int k = 0; k < a.cols_; ++k) {
            const Rat& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < b.cols_; ++j) {
                if (b.at(k, j).is_zero()) continue;
                r.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    return r;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InternalError("RatMatrix add: dimension mismatch");
    RatMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
    return r;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InternalError("RatMatrix sub: dimension mismatch");
    RatMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
    return r;
}

RatMatrix RatMatrix::scaled(const Rat& c) const {
    RatMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
    return r;
}

bool operator==(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (size_t i = 0; i < a.a_.size(); ++i)
        if (a.a_[i] != b.a_[i]) return false;
    return true;
}

std::vector<Rat> RatMatrix::mul_vec(const std::vector<Rat>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw InternalError("RatMatrix mul_vec: dimension mismatch");
    std::vector<Rat> r(rows_);
    for (int i = 0; i < rows_; ++i) {
        Rat s;
        for (int j = 0; j < cols_; ++j) {
            if (!at(i, j).is_zero() && !v[j].is_zero()) s += at(i, j) * v[j];
        }
        r[i] = std::move(s);
    }
    return r;
}

Rat RatMatrix::row_sum(int i) const {
    Rat s;
    for (int j = 0; j < cols_; ++j) s += at(i, j);
    return s;
}

// ---------------------------------------------------------------------------
// Fraction-free Gauss-Jordan (Montante). After step t the first t+1 columns
// are diagonal and every entry is a minor of the input, so the exact division
// by the previous pivot never truncates. Final diagonal entries all equal the
// determinant of the row-permuted system.

ScaledSolution solve_int_exact(std::vector<std::vector<BigInt>> a,
                               std::vector<std::vector<BigInt>> b) {
    const int n = static_cast<int>(a.size());
    const int k = n > 0 && !b.empty() ? static_cast<int>(b[0].size()) : 0;
    if (static_cast<int>(b.size()) != n) throw InternalError("solve_int_exact: rhs row mismatch");
    // Augment.
    std::vector<std::vector<BigInt>> m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(a[i].size()) != n) throw InternalError("solve_int_exact: not square");
        m[i] = std::move(a[i]);
        m[i].insert(m[i].end(), std::make_move_iterator(b[i].begin()), std::make_move_iterator(b[i].end()));
    }
    const int cols = n + k;
    BigInt prev(1);
    for (int t = 0; t < n; ++t) {
        int piv = -1;
        for (int i = t; i < n; ++i) {
            if (m[i][t].is_zero()) continue;
            if (piv < 0 || m[i][t].abs() > m[piv][t].abs()) piv = i;
        }
        if (piv < 0) throw SingularMatrix("matrix is singular (rank deficiency in column " + std::to_string(t) + ")");
        if (piv != t) std::swap(m[piv], m[t]);
        const BigInt p = m[t][t];
        for (int i = 0; i < n; ++i) {
            if (i == t) continue;
            BigInt f = std::move(m[i][t]);
            m[i][t] = BigInt(0);
            if (f.is_zero()) {
                // Row still needs the pivot scaling to keep the shared denominator.
                for (int j = t + 1; j < cols; ++j) {
                    if (m[i][j].is_zero()) continue;
                    m[i][j] = (p * m[i][j]).exact_div(prev);
                }
                continue;
            }
            for (int j = t + 1; j < cols; ++j) {
                m[i][j] = (p * m[i][j] - f * m[t][j]).exact_div(prev);
            }
        }
        prev = p;
    }
    // prev == m[t][t] for the last step; every diagonal entry equals prev now.
    ScaledSolution s;
    s.den = prev;
    s.num.assign(n, std::vector<BigInt>(k));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) s.num[i][j] = std::move(m[i][n + j]);
    if (s.den.sign() < 0) {
        s.den = -s.den;
        for (auto& row : s.num)
            for (auto& v : row) v = -v;
    }
    return s;
}

namespace {

// Clears denominators of [A|B] row by row; the solution set is unchanged.
void to_integer_rows(const RatMatrix& a, const RatMatrix& b,
                     std::vector<std::vector<BigInt>>& ai, std::vector<std::vector<BigInt>>& bi) {
    const int n = a.rows(), k = b.cols();
    ai.assign(n, std::vector<BigInt>(n));
    bi.assign(n, std::vector<BigInt>(k));
    for (int i = 0; i < n; ++i) {
        BigInt l(1);
        for (int j = 0; j < n; ++j) l = BigInt::lcm(l, a.at(i, j).den());
        for (int j = 0; j < k; ++j) l = BigInt::lcm(l, b.at(i, j).den());
        for (int j = 0; j < n; ++j) ai[i][j] = a.at(i, j).num() * l.exact_div(a.at(i, j).den());
        for (int j = 0; j < k; ++j) bi[i][j] = b.at(i, j).num() * l.exact_div(b.at(i, j).den());
    }
}

}  // namespace

ScaledSolution solve_exact_scaled(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != a.cols()) throw InternalError("solve_exact: matrix not square");
    if (a.rows() != b.rows()) throw InternalError("solve_exact: rhs row mismatch");
    std::vector<std::vector<BigInt>> ai, bi;
    to_integer_rows(a, b, ai, bi);
    return solve_int_exact(std::move(ai), std::move(bi));
}

RatMatrix solve_exact(const RatMatrix& a, const RatMatrix& b) {
    ScaledSolution s = solve_exact_scaled(a, b);
    RatMatrix x(b.rows(), b.cols());
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) x.at(i, j) = Rat(s.num[i][j], s.den);
    return x;
}

Rat det_exact(const RatMatrix& a) {
    if (a.rows() != a.cols()) throw InternalError("det_exact: matrix not square");
    const int n = a.rows();
    if (n == 0) return Rat(1);
    // Scale rows to integers, run the forward part of Bareiss, divide back.
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
    Rat scale(1);
    for (int i = 0; i < n; ++i) {
        BigInt l(1);
        for (int j = 0; j < n; ++j) l = BigInt::lcm(l, a.at(i, j).den());
        for (int j = 0; j < n; ++j) m[i][j] = a.at(i, j).num() * l.exact_div(a.at(i, j).den());
        scale *= Rat(BigInt(1), l);
    }
    BigInt prev(1);
    int sign = 1;
    for (int t = 0; t < n; ++t) {
        int piv = -1;
        for (int i = t; i < n; ++i) {
            if (m[i][t].is_zero()) continue;
            if (piv < 0 || m[i][t].abs() > m[piv][t].abs()) piv = i;
        }
        if (piv < 0) return Rat(0);
        if (piv != t) {
            std::swap(m[piv], m[t]);
            sign = -sign;
        }
        for (int i = t + 1; i < n; ++i) {
            for (int j = t + 1; j < n; ++j) {
                m[i][j] = (m[t][t] * m[i][j] - m[i][t] * m[t][j]).exact_div(prev);
            }
            m[i][t] = BigInt(0);
        }
        prev = m[t][t];
    }
    Rat det(prev, BigInt(1));
    if (sign < 0) det = -det;
    return det * scale;
}

RatMatrix schur_complement(const RatMatrix& l, const std::vector<int>& keep) {
    const int n = l.rows();
    if (l.cols() != n) throw InternalError("schur_complement: matrix not square");
    std::vector<char> kept(n, 0);
    for (int v : keep) {
        if (v < 0 || v >= n) throw InternalError("schur_complement: keep index out of range");
        kept[v] = 1;
    }
    std::vector<int> interior;
    for (int i = 0; i < n; ++i)
        if (!kept[i]) interior.push_back(i);
    const int ni = static_cast<int>(interior.size());
    const int nk = static_cast<int>(keep.size());
    if (ni == 0) {
        RatMatrix s(nk, nk);
        for (int i = 0; i < nk; ++i)
            for (int j = 0; j < nk; ++j) s.at(i, j) = l.at(keep[i], keep[j]);
        return s;
    }
    RatMatrix lii(ni, ni), lik(ni, nk);
    for (int i = 0; i < ni; ++i) {
        for (int j = 0; j < ni; ++j) lii.at(i, j) = l.at(interior[i], interior[j]);
        for (int j = 0; j < nk; ++j) lik.at(i, j) = l.at(interior[i], keep[j]);
    }
    ScaledSolution x;  // x = Lii^{-1} Lik
    try {
        x = solve_exact_scaled(lii, lik);
    } catch (const SingularMatrix&) {
        throw SingularInterior("eliminated block is singular (interior component disconnected from kept set)");
    }
    bool all_int = true;
    for (int i = 0; i < nk && all_int; ++i)
        for (int t = 0; t < ni && all_int; ++t)
            if (!l.at(keep[i], interior[t]).is_integer()) all_int = false;
    RatMatrix s(nk, nk);
    for (int i = 0; i < nk; ++i) {
        for (int j = 0; j < nk; ++j) {
            // L_ki row i dot (Lii^{-1} Lik) column j.
            if (all_int) {
                BigInt acc(0);
                for (int t = 0; t < ni; ++t) {
                    const Rat& lki = l.at(keep[i], interior[t]);
                    if (lki.is_zero()) continue;
                    acc += lki.num() * x.num[t][j];
                }
                s.at(i, j) = l.at(keep[i], keep[j]) - Rat(acc, x.den);
            } else {
                Rat r;
                for (int t = 0; t < ni; ++t) {
                    const Rat& lki = l.at(keep[i], interior[t]);
                    if (lki.is_zero()) continue;
                    r += lki * Rat(x.num[t][j], x.den);
                }
                s.at(i, j) = l.at(keep[i], keep[j]) - r;
            }
        }
    }
    return s;
}

std::vector<Rat> char_poly(const RatMatrix& a) {
    if (a.rows() != a.cols()) throw InternalError("char_poly: matrix not square");
    const int n = a.rows();
    std::vector<Rat> c(n + 1);
    c[n] = Rat(1);
    RatMatrix m = RatMatrix(n, n);  // M_0 = 0, loop computes M_k = A M_{k-1} + c_{n-k+1} I
    RatMatrix id = RatMatrix::identity(n);
    Rat ck(1);
    for (int k = 1; k <= n; ++k) {
        // M_k = A * (M_{k-1} + c_{n-k+1} I)
        RatMatrix t = m + id.scaled(ck);
        m = a * t;
        Rat tr;
        for (int i = 0; i < n; ++i) tr += m.at(i, i);
        ck = -(tr / Rat(k));
        c[n - k] = ck;
    }
    return c;
}

}  // namespace fractal
