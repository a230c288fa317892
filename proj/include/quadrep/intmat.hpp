#pragma once

#include <vector>

#include "quadrep/numbers.hpp"

namespace quadrep {

using IMat = std::vector<std::vector<Int>>;   // row-major, small and dense
using IVec = std::vector<Int>;

IMat imat_zero(int rows, int cols);
IMat imat_identity(int n);
IMat imat_mul(const IMat& a, const IMat& b);
IMat imat_transpose(const IMat& a);
bool imat_equal(const IMat& a, const IMat& b);

// fraction-free Gaussian elimination (Bareiss)
Int det_bareiss(IMat a);

// leading principal minors det(A[0..i][0..i]) for i = 0..n-1
std::vector<Int> leading_minors(const IMat& a);

// adjugate via cofactor determinants; adj(A) * A = det(A) * I
IMat adjugate(const IMat& a);

// column-style Hermite normal form of the lattice spanned by the columns of a.
// Zero columns dropped; pivots positive; entries right of a pivot in its row
// reduced into [0, pivot).  Unique for a fixed column lattice.
IMat hnf_columns(IMat a);

// basis of { x in Z^d : <x, v> = 0 } as the columns of a d x (d-1) matrix in HNF
IMat kernel_basis(const IVec& v);

// solve B*x = w exactly over the integers for B with independent columns;
// returns false if no integral (or no rational) solution
bool solve_integral(const IMat& b, const IVec& w, IVec& x);

Int content(const IVec& v);
Int dot(const IVec& a, const IVec& b);

}  // namespace quadrep
