#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlsw {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Real CSR matrix with sorted, duplicate-free columns per row.
struct SparseMatrixReal {
    int n = 0;
    std::vector<int> row_offsets;  // size n+1
    std::vector<int> cols;
    std::vector<double> vals;

    static SparseMatrixReal zero_like_pattern(const SparseMatrixReal& a) {
        SparseMatrixReal z = a;
        std::fill(z.vals.begin(), z.vals.end(), 0.0);
        return z;
    }

    static SparseMatrixReal identity(int n) {
        SparseMatrixReal m;
        m.n = n;
        m.row_offsets.resize(n + 1);
        m.cols.resize(n);
        m.vals.assign(n, 1.0);
        for (int i = 0; i <= n; ++i) m.row_offsets[i] = i;
        for (int i = 0; i < n; ++i) m.cols[i] = i;
        return m;
    }

    double diag(int i) const {
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
            if (cols[k] == i) return vals[k];
        return 0.0;
    }

    template <typename T>
    void multiply(const std::vector<T>& x, std::vector<T>& y) const {
        for (int i = 0; i < n; ++i) {
            T acc{};
            for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
                acc += vals[k] * x[cols[k]];
            y[i] = acc;
        }
    }
};

/// Builds a CSR matrix from a fixed sparsity pattern given as per-row sorted
/// column lists; values start at zero and are accumulated via add_at.
struct CsrBuilder {
    SparseMatrixReal m;
    // maps (i,j) -> value slot via binary search within the row
    int slot(int i, int j) const {
        const auto& c = m.cols;
        int lo = m.row_offsets[i], hi = m.row_offsets[i + 1];
        auto it = std::lower_bound(c.begin() + lo, c.begin() + hi, j);
        if (it == c.begin() + hi || *it != j)
            throw std::logic_error("CsrBuilder: entry outside sparsity pattern");
        return static_cast<int>(it - c.begin());
    }
    void add(int i, int j, double v) { m.vals[slot(i, j)] += v; }
};

inline CsrBuilder make_builder(int n, const std::vector<std::vector<int>>& row_cols) {
    CsrBuilder b;
    b.m.n = n;
    b.m.row_offsets.resize(n + 1, 0);
    for (int i = 0; i < n; ++i)
        b.m.row_offsets[i + 1] = b.m.row_offsets[i] + static_cast<int>(row_cols[i].size());
    b.m.cols.reserve(b.m.row_offsets[n]);
    for (int i = 0; i < n; ++i)
        b.m.cols.insert(b.m.cols.end(), row_cols[i].begin(), row_cols[i].end());
    b.m.vals.assign(b.m.row_offsets[n], 0.0);
    return b;
}

/// Extracts the submatrix with the given row and column index sets. col_of
/// maps a global column index to its position in the column set, or -1.
inline SparseMatrixReal csr_submatrix(const SparseMatrixReal& a, const std::vector<int>& rows,
                                      const std::vector<int>& col_of, int ncols) {
    SparseMatrixReal s;
    s.n = static_cast<int>(rows.size());
    s.row_offsets.resize(s.n + 1, 0);
    for (int i = 0; i < s.n; ++i) {
        int gi = rows[i];
        for (int k = a.row_offsets[gi]; k < a.row_offsets[gi + 1]; ++k)
            if (col_of[a.cols[k]] >= 0) ++s.row_offsets[i + 1];
    }
    for (int i = 0; i < s.n; ++i) s.row_offsets[i + 1] += s.row_offsets[i];
    s.cols.resize(s.row_offsets[s.n]);
    s.vals.resize(s.row_offsets[s.n]);
    for (int i = 0; i < s.n; ++i) {
        int gi = rows[i], pos = s.row_offsets[i];
        for (int k = a.row_offsets[gi]; k < a.row_offsets[gi + 1]; ++k) {
            int cj = col_of[a.cols[k]];
            if (cj >= 0) {
                s.cols[pos] = cj;
                s.vals[pos] = a.vals[k];
                ++pos;
            }
        }
    }
    (void)ncols;
    return s;
}

/// alpha*M + beta*(K + W) acting on complex vectors; any of the three
/// matrices may be null (treated as zero).
struct CompositeOperator {
    cplx alpha{0.0, 0.0};
    cplx beta{0.0, 0.0};
    const SparseMatrixReal* M = nullptr;
    const SparseMatrixReal* K = nullptr;
    const SparseMatrixReal* W = nullptr;

    int dim() const {
        if (M) return M->n;
        if (K) return K->n;
        if (W) return W->n;
        return 0;
    }
};

inline CVector apply_operator(const CompositeOperator& op, const CVector& x) {
    const int n = op.dim();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("apply: dimension mismatch");
    CVector y(n, cplx{});
    CVector tmp(n);
    if (op.M && op.alpha != cplx{}) {
        op.M->multiply(x, tmp);
        for (int i = 0; i < n; ++i) y[i] += op.alpha * tmp[i];
    }
    if (op.beta != cplx{}) {
        if (op.K) {
            op.K->multiply(x, tmp);
            for (int i = 0; i < n; ++i) y[i] += op.beta * tmp[i];
        }
        if (op.W) {
            op.W->multiply(x, tmp);
            for (int i = 0; i < n; ++i) y[i] += op.beta * tmp[i];
        }
    }
    return y;
}

inline CVector diag_of(const CompositeOperator& op) {
    const int n = op.dim();
    CVector d(n, cplx{});
    for (int i = 0; i < n; ++i) {
        if (op.M) d[i] += op.alpha * op.M->diag(i);
        if (op.K) d[i] += op.beta * op.K->diag(i);
        if (op.W) d[i] += op.beta * op.W->diag(i);
    }
    return d;
}

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, SolveStats stats)
        : std::runtime_error(what), stats(stats) {}
    SolveStats stats;
};

namespace detail {

inline cplx cdot(const CVector& a, const CVector& b) {
    cplx s{};
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double cnorm(const CVector& a) { return std::sqrt(std::abs(cdot(a, a))); }

} // namespace detail

/// Jacobi-preconditioned BiCGStab for the composite operator. Throws
/// SolverError on breakdown or iteration exhaustion; never returns a
/// non-converged result silently.
inline std::pair<CVector, SolveStats> solve_bicgstab(const CompositeOperator& op, const CVector& b,
                                                     const CVector& x0, double tol, int maxit) {
    if (tol <= 0.0) throw std::invalid_argument("solve_bicgstab: tol must be positive");
    const int n = op.dim();
    const double bnorm = detail::cnorm(b);
    SolveStats stats;
    if (bnorm == 0.0) {
        stats.converged = true;
        return {CVector(n, cplx{}), stats};
    }

    CVector prec = diag_of(op);
    for (auto& d : prec) d = (std::abs(d) > 0.0) ? 1.0 / d : cplx{1.0, 0.0};
    auto precondition = [&](const CVector& v) {
        CVector z(n);
        for (int i = 0; i < n; ++i) z[i] = prec[i] * v[i];
        return z;
    };

    CVector x = x0;
    CVector r = apply_operator(op, x);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double rnorm = detail::cnorm(r);
    if (rnorm <= tol * bnorm) {
        stats.converged = true;
        stats.relative_residual = rnorm / bnorm;
        return {x, stats};
    }

    const CVector r0 = r;
    CVector p(n, cplx{}), v(n, cplx{});
    cplx rho_prev{1.0}, alpha{1.0}, omega{1.0};
    const double breakdown_eps = 1e-30;

    for (int it = 1; it <= maxit; ++it) {
        cplx rho = detail::cdot(r0, r);
        if (std::abs(rho) < breakdown_eps * bnorm * bnorm) {
            stats.iterations = it - 1;
            stats.relative_residual = rnorm / bnorm;
            throw SolverError("bicgstab: rho breakdown", stats);
        }
        if (it == 1) {
            p = r;
        } else {
            cplx beta = (rho / rho_prev) * (alpha / omega);
            for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        CVector phat = precondition(p);
        v = apply_operator(op, phat);
        cplx denom = detail::cdot(r0, v);
        if (std::abs(denom) < breakdown_eps * bnorm * bnorm) {
            stats.iterations = it - 1;
            stats.relative_residual = rnorm / bnorm;
            throw SolverError("bicgstab: alpha breakdown", stats);
        }
        alpha = rho / denom;
        CVector s(n);
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (detail::cnorm(s) <= tol * bnorm) {
            for (int i = 0; i < n; ++i) x[i] += alpha * phat[i];
            r = apply_operator(op, x);
            for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
            stats.iterations = it;
            stats.relative_residual = detail::cnorm(r) / bnorm;
            stats.converged = stats.relative_residual <= tol;
            if (stats.converged) return {x, stats};
            rnorm = stats.relative_residual * bnorm;
            rho_prev = rho;
            continue;
        }
        CVector shat = precondition(s);
        CVector t = apply_operator(op, shat);
        cplx tt = detail::cdot(t, t);
        if (std::abs(tt) < breakdown_eps) {
            stats.iterations = it;
            stats.relative_residual = rnorm / bnorm;
            throw SolverError("bicgstab: omega breakdown", stats);
        }
        omega = detail::cdot(t, s) / tt;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        rnorm = detail::cnorm(r);
        rho_prev = rho;
        if (rnorm <= tol * bnorm) {
            // confirm with the true residual
            CVector rt = apply_operator(op, x);
            for (int i = 0; i < n; ++i) rt[i] = b[i] - rt[i];
            double truenorm = detail::cnorm(rt);
            stats.iterations = it;
            stats.relative_residual = truenorm / bnorm;
            if (truenorm <= tol * bnorm) {
                stats.converged = true;
                return {x, stats};
            }
            r = rt;
            rnorm = truenorm;
        }
        if (std::abs(omega) < breakdown_eps) {
            stats.iterations = it;
            stats.relative_residual = rnorm / bnorm;
            throw SolverError("bicgstab: stagnation (omega ~ 0)", stats);
        }
    }
    stats.iterations = maxit;
    stats.relative_residual = rnorm / bnorm;
    throw SolverError("bicgstab: maximum iterations reached", stats);
}

} // namespace nlsw
