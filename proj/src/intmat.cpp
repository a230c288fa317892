#include "quadrep/intmat.hpp"

#include <algorithm>

#include "quadrep/errors.hpp"

namespace quadrep {

IMat imat_zero(int rows, int cols) { return IMat(rows, IVec(cols, 0)); }

IMat imat_identity(int n) {
    IMat m = imat_zero(n, n);
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IMat imat_mul(const IMat& a, const IMat& b) {
    int n = static_cast<int>(a.size()), m = static_cast<int>(b[0].size());
    int kk = static_cast<int>(b.size());
    IMat c = imat_zero(n, m);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < kk; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

IMat imat_transpose(const IMat& a) {
    int n = static_cast<int>(a.size()), m = static_cast<int>(a[0].size());
    IMat t = imat_zero(m, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) t[j][i] = a[i][j];
    return t;
}

bool imat_equal(const IMat& a, const IMat& b) { return a == b; }

Int det_bareiss(IMat a) {
    int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

std::vector<Int> leading_minors(const IMat& a) {
    int n = static_cast<int>(a.size());
    std::vector<Int> out(n);
    for (int i = 0; i < n; ++i) {
        IMat sub(i + 1, IVec(i + 1));
        for (int r = 0; r <= i; ++r)
            for (int c = 0; c <= i; ++c) sub[r][c] = a[r][c];
        out[i] = det_bareiss(sub);
    }
    return out;
}

IMat adjugate(const IMat& a) {
    int n = static_cast<int>(a.size());
    IMat adj = imat_zero(n, n);
    if (n == 1) {
        adj[0][0] = 1;
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IMat minor(n - 1, IVec(n - 1));
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor[rr][cc++] = a[r][c];
                }
                ++rr;
            }
            Int cof = det_bareiss(std::move(minor));
            adj[j][i] = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return adj;
}

IMat hnf_columns(IMat a) {
    int rows = static_cast<int>(a.size());
    int cols = static_cast<int>(a[0].size());
    // work on columns; standard HNF by row-position pivoting
    int pivot_col = 0;
    for (int r = 0; r < rows && pivot_col < cols; ++r) {
        // gcd-reduce columns pivot_col..cols-1 on row r
        for (int c = pivot_col + 1; c < cols; ++c) {
            while (a[r][c] != 0) {
                if (a[r][pivot_col] == 0) {
                    for (int i = 0; i < rows; ++i) std::swap(a[i][pivot_col], a[i][c]);
                    continue;
                }
                Int q = a[r][c] / a[r][pivot_col];  // truncating division
                if (q != 0)
                    for (int i = 0; i < rows; ++i) a[i][c] -= q * a[i][pivot_col];
                if (a[r][c] != 0) {
                    for (int i = 0; i < rows; ++i) std::swap(a[i][pivot_col], a[i][c]);
                }
            }
        }
        if (a[r][pivot_col] == 0) continue;
        if (a[r][pivot_col] < 0)
            for (int i = 0; i < rows; ++i) a[i][pivot_col] = -a[i][pivot_col];
        // reduce earlier columns against this pivot
        for (int c = 0; c < pivot_col; ++c) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), a[r][c].get_mpz_t(), a[r][pivot_col].get_mpz_t());
            if (q != 0)
                for (int i = 0; i < rows; ++i) a[i][c] -= q * a[i][pivot_col];
        }
        ++pivot_col;
    }
    // drop zero columns
    IMat out;
    out.assign(rows, IVec());
    for (int c = 0; c < cols; ++c) {
        bool zero = true;
        for (int i = 0; i < rows; ++i)
            if (a[i][c] != 0) { zero = false; break; }
        if (!zero)
            for (int i = 0; i < rows; ++i) out[i].push_back(a[i][c]);
    }
    if (out[0].empty()) return IMat();
    return out;
}

IMat kernel_basis(const IVec& v) {
    int d = static_cast<int>(v.size());
    bool nonzero = false;
    for (const Int& x : v) nonzero |= (x != 0);
    if (!nonzero) fail(Err::Internal, "kernel_basis of zero vector");
    // column operations on the row vector v, mirrored into U (det +-1):
    // after the loop v*U = (g, 0, ..., 0), so columns 2..d of U span the kernel
    IVec w = v;
    IMat u = imat_identity(d);
    for (int j = 1; j < d; ++j) {
        if (w[j] == 0) continue;
        if (w[0] == 0) {
            std::swap(w[0], w[j]);
            for (int i = 0; i < d; ++i) std::swap(u[i][0], u[i][j]);
            continue;
        }
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), w[0].get_mpz_t(),
                   w[j].get_mpz_t());
        Int a = w[0] / g, b = w[j] / g;
        // (col0, colj) <- (s*col0 + t*colj, -b*col0 + a*colj); det = s*a + t*b = 1
        for (int i = 0; i < d; ++i) {
            Int c0 = u[i][0], cj = u[i][j];
            u[i][0] = s * c0 + t * cj;
            u[i][j] = -b * c0 + a * cj;
        }
        w[0] = g;
        w[j] = 0;
    }
    IMat basis(d, IVec(d - 1));
    for (int i = 0; i < d; ++i)
        for (int j = 1; j < d; ++j) basis[i][j - 1] = u[i][j];
    return hnf_columns(std::move(basis));
}

bool solve_integral(const IMat& b, const IVec& w, IVec& x) {
    int rows = static_cast<int>(b.size());
    int cols = static_cast<int>(b[0].size());
    // rational Gaussian elimination on [b | w]
    std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(cols + 1));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m[i][j] = Rat(b[i][j]);
        m[i][cols] = Rat(w[i]);
    }
    std::vector<int> pivot_row(cols, -1);
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[piv], m[r]);
        Rat inv = m[r][c];
        for (int j = c; j <= cols; ++j) m[r][j] /= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (int j = c; j <= cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_row[c] = r;
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (m[i][cols] != 0) return false;
    x.assign(cols, Int(0));
    for (int c = 0; c < cols; ++c) {
        if (pivot_row[c] < 0) fail(Err::Internal, "solve_integral: dependent columns");
        Rat val = m[pivot_row[c]][cols];
        if (val.get_den() != 1) return false;
        x[c] = val.get_num();
    }
    return true;
}

Int content(const IVec& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd(g, x);
    return g;
}

Int dot(const IVec& a, const IVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace quadrep
