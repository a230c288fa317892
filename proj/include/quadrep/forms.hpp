#pragma once

#include <string>

#include "quadrep/intmat.hpp"

namespace quadrep {

// Positive definite quadratic form Q(x) = (1/2) x^T A x for an even integral
// symmetric Gram matrix A.  Invariants cached at validation time.
struct QuadraticForm {
    int dim = 0;
    IMat gram;          // k x k, symmetric, even diagonal, positive definite
    Int disc;           // det(gram) > 0
    Int level;          // minimal N with N * gram^{-1} even integral; N | 2*disc
    bool primitive = false;
    std::string id;     // report label, not part of value semantics

    bool diagonal() const;
};

// Validation errors name the offending index/minor:
//   NotSymmetric, OddDiagonal, NotPositiveDefinite.
QuadraticForm validate(const IMat& raw, const std::string& id = "");

// minimal N with N*A^{-1} even integral, via the exact adjugate
Int level_of(const IMat& gram, const Int& disc);

Int eval_form(const QuadraticForm& f, const IVec& x);
Int eval_gram(const IMat& gram, const IVec& x);  // x^T A x (no 1/2)

// U^T A U for unimodular U (basis change; used by invariance tests)
QuadraticForm transform(const QuadraticForm& f, const IMat& u);

struct MinimaProfile {
    std::vector<Int> minima;  // nondecreasing successive minima of Q
    IMat witnesses;           // rows are the witness vectors, Q(row j) = minima[j]
};

// exact successive minima by exhaustive enumeration; bound doubles from the
// largest diagonal entry until k independent witnesses exist
MinimaProfile successive_minima(const QuadraticForm& f, long long node_budget = 100000000);

struct OrthoLattice {
    int ambient_dim = 0;
    IVec v;            // defining vector
    IVec v_primitive;  // v / content(v)
    IMat basis;        // d x (d-1), columns span Z^d ∩ v^⊥, column HNF
    IMat gram;         // (d-1) x (d-1), gram[i][j] = <e_i, e_j>
    Int disc;          // det(gram) = |v'|^2
};

OrthoLattice ortho_lattice(const IVec& v);

}  // namespace quadrep
