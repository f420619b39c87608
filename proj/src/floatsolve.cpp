#include "fractal/floatsolve.hpp"

#include <cmath>
#include <cstdlib>

#include "fractal/errors.hpp"

namespace fractal {

std::vector<double> SparseSym::mul(const std::vector<double>& x) const {
    std::vector<double> y(n, 0.0);
    for (size_t t = 0; t < val.size(); ++t) {
        int i = row[t], j = col[t];
        y[i] += val[t] * x[j];
        if (i != j) y[j] += val[t] * x[i];
    }
    return y;
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double residual_rel(const SparseSym& a, const std::vector<double>& x, const std::vector<double>& b) {
    std::vector<double> ax = a.mul(x);
    double rn = 0.0;
    for (int i = 0; i < a.n; ++i) {
        double d = ax[i] - b[i];
        rn += d * d;
    }
    double bn = norm2(b);
    if (bn == 0.0) return std::sqrt(rn);
    return std::sqrt(rn) / bn;
}

CholeskyDense::CholeskyDense(const SparseSym& a) : n_(a.n) {
    l_.assign(static_cast<size_t>(n_) * n_, 0.0);
    for (size_t t = 0; t < a.val.size(); ++t) {
        int i = a.row[t], j = a.col[t];
        if (i < j) std::swap(i, j);
        l_[static_cast<size_t>(i) * n_ + j] += a.val[t];
    }
    for (int j = 0; j < n_; ++j) {
        double d = l_[static_cast<size_t>(j) * n_ + j];
        for (int k = 0; k < j; ++k) {
            double v = l_[static_cast<size_t>(j) * n_ + k];
            d -= v * v;
        }
        if (!(d > 0.0)) throw SingularInterior("matrix is not positive definite (Cholesky breakdown)");
        d = std::sqrt(d);
        l_[static_cast<size_t>(j) * n_ + j] = d;
        for (int i = j + 1; i < n_; ++i) {
            double s = l_[static_cast<size_t>(i) * n_ + j];
            const double* ri = &l_[static_cast<size_t>(i) * n_];
            const double* rj = &l_[static_cast<size_t>(j) * n_];
            for (int k = 0; k < j; ++k) s -= ri[k] * rj[k];
            l_[static_cast<size_t>(i) * n_ + j] = s / d;
        }
    }
}

std::vector<double> CholeskyDense::solve(const std::vector<double>& b) const {
    std::vector<double> y(b);
    for (int i = 0; i < n_; ++i) {
        double s = y[i];
        const double* ri = &l_[static_cast<size_t>(i) * n_];
        for (int k = 0; k < i; ++k) s -= ri[k] * y[k];
        y[i] = s / ri[i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n_; ++k) s -= l_[static_cast<size_t>(k) * n_ + i] * y[k];
        y[i] = s / l_[static_cast<size_t>(i) * n_ + i];
    }
    return y;
}

std::vector<double> CholeskyDense::solve_refined(const SparseSym& a, const std::vector<double>& b) const {
    std::vector<double> x = solve(b);
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> r = a.mul(x);
        for (int i = 0; i < n_; ++i) r[i] = b[i] - r[i];
        std::vector<double> d = solve(r);
        for (int i = 0; i < n_; ++i) x[i] += d[i];
    }
    return x;
}

double CholeskyDense::inv_norm_estimate() const {
    // Hager's power method on |A^{-1}| for the 1-norm; a few iterations.
    std::vector<double> v(n_, 1.0 / n_);
    double est = 0.0;
    for (int it = 0; it < 5; ++it) {
        std::vector<double> y = solve(v);
        double e = 0.0;
        for (double t : y) e += std::abs(t);
        est = std::max(est, e);
        std::vector<double> z(n_);
        for (int i = 0; i < n_; ++i) z[i] = y[i] >= 0 ? 1.0 : -1.0;
        std::vector<double> w = solve(z);
        int jmax = 0;
        for (int i = 1; i < n_; ++i)
            if (std::abs(w[i]) > std::abs(w[jmax])) jmax = i;
        double wmax = std::abs(w[jmax]);
        double vw = 0.0;
        for (int i = 0; i < n_; ++i) vw += v[i] * w[i];
        if (wmax <= vw) break;
        v.assign(n_, 0.0);
        v[jmax] = 1.0;
    }
    return est;
}

namespace {

FloatSolveResult solve_cg(const SparseSym& a, const std::vector<double>& b, double tol) {
    const int n = a.n;
    std::vector<double> diag(n, 0.0);
    for (size_t t = 0; t < a.val.size(); ++t)
        if (a.row[t] == a.col[t]) diag[a.row[t]] += a.val[t];
    for (int i = 0; i < n; ++i)
        if (diag[i] <= 0.0) throw SingularInterior("CG: nonpositive diagonal");

    std::vector<double> x(n, 0.0), r(b), z(n), p(n);
    double bn = norm2(b);
    if (bn == 0.0) return {x, 0.0};
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = 0.0;
    for (int i = 0; i < n; ++i) rz += r[i] * z[i];
    const long max_it = 20l * n + 100;
    for (long it = 0; it < max_it; ++it) {
        if (norm2(r) / bn <= tol * 0.1) break;
        std::vector<double> ap = a.mul(p);
        double pap = 0.0;
        for (int i = 0; i < n; ++i) pap += p[i] * ap[i];
        if (pap <= 0.0) break;
        double alpha = rz / pap;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
        double rz2 = 0.0;
        for (int i = 0; i < n; ++i) rz2 += r[i] * z[i];
        double beta = rz2 / rz;
        rz = rz2;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    FloatSolveResult res;
    res.residual = residual_rel(a, x, b);
    res.x = std::move(x);
    return res;
}

}  // namespace

FloatSolveResult solve_float(const SparseSym& a, const std::vector<double>& b, double tol,
                             int dense_limit) {
    if (static_cast<int>(b.size()) != a.n) throw InternalError("solve_float: rhs size mismatch");
    FloatSolveResult res;
    if (a.n <= dense_limit) {
        CholeskyDense chol(a);
        res.x = chol.solve_refined(a, b);
        res.residual = residual_rel(a, res.x, b);
    } else {
        res = solve_cg(a, b, tol);
    }
    if (res.residual > tol) {
        throw NoConvergence("requested tolerance " + std::to_string(tol) +
                                " not reached (achieved relative residual " +
                                std::to_string(res.residual) + ")",
                            res.residual);
    }
    return res;
}

}  // namespace fractal
