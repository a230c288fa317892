#include <algorithm>

#include "quadrep/errors.hpp"
#include "quadrep/local_densities.hpp"

namespace quadrep {

namespace {

struct ModCtx {
    Int p;
    Int mod;          // p^P for the current working precision P
    int prec;

    Int reduce(const Int& x) const { return ((x % mod) + mod) % mod; }

    // valuation of the residue class; prec when the class is 0
    int val(const Int& x) const {
        Int r = reduce(x);
        if (r == 0) return prec;
        return valuation(r, p);
    }

    Int inv(const Int& x) const {
        Int out;
        if (mpz_invert(out.get_mpz_t(), reduce(x).get_mpz_t(), mod.get_mpz_t()) == 0)
            fail(Err::Internal, "jordan: non-invertible unit");
        return out;
    }
};

}  // namespace

std::vector<JordanBlock> jordan_decompose(const QuadraticForm& f, long long p, int precision) {
    int vd = valuation(2 * f.disc, to_int(p));
    if (precision < vd + 4)
        fail(Err::PrecisionTooLow, "jordan_decompose needs precision >= v_p(2D)+4");
    int k = f.dim;
    ModCtx ctx{to_int(p), pow_int(to_int(p), precision), precision};
    IMat m(k, IVec(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m[i][j] = ctx.reduce(f.gram[i][j]);

    std::vector<JordanBlock> blocks;
    int pos = 0;
    auto swap_rc = [&](int a, int b) {
        if (a == b) return;
        std::swap(m[a], m[b]);
        for (int i = 0; i < k; ++i) std::swap(m[i][a], m[i][b]);
    };

    while (pos < k) {
        // minimum valuation over the remaining block
        int vmin = ctx.prec;
        int di = -1, oi = -1, oj = -1;
        for (int i = pos; i < k; ++i)
            for (int j = i; j < k; ++j) {
                int v = ctx.val(m[i][j]);
                if (v < vmin) {
                    vmin = v;
                    di = oi = oj = -1;
                }
                if (v == vmin) {
                    if (i == j && di < 0) di = i;
                    if (i != j && oi < 0) { oi = i; oj = j; }
                }
            }
        if (vmin >= ctx.prec) fail(Err::PrecisionTooLow, "jordan: pivot valuation reaches precision");

        bool two_dim = false;
        if (p == 2 && oi >= 0 && di < 0) {
            // even 2x2 constituent; both diagonal valuations exceed vmin, so
            // det has valuation exactly 2*vmin
            two_dim = true;
        }
        if (p != 2 && di < 0) {
            // odd p: fold the off-diagonal minimum onto the diagonal;
            // x_i <- x_i + x_j or x_i - x_j, one of the two keeps valuation vmin
            int i = oi, j = oj;
            for (int sign : {1, -1}) {
                Int cand = m[i][i] + 2 * sign * m[i][j] + m[j][j];
                if (ctx.val(cand) == vmin) {
                    for (int r = 0; r < k; ++r) m[r][i] = ctx.reduce(m[r][i] + sign * m[r][j]);
                    for (int c = 0; c < k; ++c) m[i][c] = ctx.reduce(m[i][c] + sign * m[j][c]);
                    di = i;
                    break;
                }
            }
            if (di < 0) fail(Err::Internal, "jordan: diagonalization step failed");
        }

        Int pv = pow_int(to_int(p), vmin);
        if (two_dim) {
            swap_rc(pos, oi);
            swap_rc(pos + 1, oj == pos ? oi : oj);
            // B = p^a * B', det(B') odd; classify via det(B') mod 8
            Int b00 = m[pos][pos] / pv, b01 = m[pos][pos + 1] / pv;
            Int b11 = m[pos + 1][pos + 1] / pv;
            Int detb = ctx.reduce(b00 * b11 - b01 * b01);
            Int inv_det = ctx.inv(detb);
            JordanBlock blk;
            Int d8 = detb % 8;
            if (d8 == 7)
                blk.kind = JordanBlock::Hyperbolic;
            else if (d8 == 3)
                blk.kind = JordanBlock::Elliptic;
            else
                fail(Err::Internal, "jordan: 2-dim block determinant " + d8.get_str() + " mod 8");
            blk.alpha = vmin;
            blocks.push_back(blk);
            // clear rows/cols >= pos+2: M'[r][c] = M[r][c] - u_r^T B^{-1} u_c
            // with u_r = (M[pos][r], M[pos+1][r]) and B^{-1} = adj(B')/(p^a det')
            for (int r = pos + 2; r < k; ++r)
                for (int c = r; c < k; ++c) {
                    Int s = m[pos][r] * (b11 * m[pos][c] - b01 * m[pos + 1][c]) +
                            m[pos + 1][r] * (b00 * m[pos + 1][c] - b01 * m[pos][c]);
                    Int corr = ctx.reduce((s / pv) * inv_det);
                    m[r][c] = ctx.reduce(m[r][c] - corr);
                    m[c][r] = m[r][c];
                }
            for (int r = pos + 2; r < k; ++r)
                m[pos][r] = m[r][pos] = m[pos + 1][r] = m[r][pos + 1] = 0;
            pos += 2;
        } else {
            swap_rc(pos, di);
            Int piv = m[pos][pos];
            Int u = piv / pv;  // odd part of the even-Gram pivot
            Int uinv = ctx.inv(u);
            JordanBlock blk;
            blk.kind = JordanBlock::Scalar;
            blk.alpha = vmin;
            // Q-coefficient is pivot/2; at odd p the 2 is absorbed into the unit
            blk.unit = (p == 2) ? ctx.reduce(u) : ctx.reduce(u * ctx.inv(Int(2)));
            blocks.push_back(blk);
            for (int r = pos + 1; r < k; ++r)
                for (int c = r; c < k; ++c) {
                    Int s = m[pos][r] * m[pos][c];
                    Int corr = ctx.reduce((s / pv) * uinv);
                    m[r][c] = ctx.reduce(m[r][c] - corr);
                    m[c][r] = m[r][c];
                }
            for (int r = pos + 1; r < k; ++r) m[pos][r] = m[r][pos] = 0;
            pos += 1;
        }
        // precision loss <= vmin per split; keep tracking but stay on the same
        // modulus: entries below are exact mod p^(prec - sum of pivot valuations)
        ctx.prec -= vmin;
        if (ctx.prec <= 0) fail(Err::PrecisionTooLow, "jordan: precision exhausted");
    }

    // determinant cross-check: product of block determinants must be D times a
    // p-adic unit square (Legendre +1 at odd p, 1 mod 8 at p = 2)
    Int prod = 1;
    for (const JordanBlock& b : blocks) {
        Int pa = pow_int(to_int(p), b.alpha);
        if (b.kind == JordanBlock::Scalar)
            prod *= (p == 2 ? Int(b.unit * pa) : Int(2 * b.unit * pa));
        else
            prod *= pa * pa * (b.kind == JordanBlock::Hyperbolic ? Int(-1) : Int(3));
    }
    int vprod = valuation(prod, to_int(p));
    int vdisc = valuation(f.disc, to_int(p));
    bool ok = (vprod == vdisc);
    if (ok) {
        Int u1, u2;
        valuation(prod, to_int(p), &u1);
        valuation(f.disc, to_int(p), &u2);
        if (p == 2) {
            Int r = (u1 * u2) % 8;  // ratio is a square iff u1*u2 is 1 mod 8
            if (r < 0) r += 8;
            ok = (r == 1);
        } else {
            ok = (jacobi(u1, to_int(p)) == jacobi(u2, to_int(p)));
        }
    }
    if (!ok) fail(Err::Internal, "jordan: block determinant mismatch with disc");
    return blocks;
}

}  // namespace quadrep
