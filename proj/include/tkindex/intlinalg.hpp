#pragma once

#include "tkindex/basic.hpp"

#include <optional>

namespace tkindex::linalg {

// Row-style Hermite normal form of the lattice spanned by the rows of m.
// Zero rows are dropped; pivots are positive and entries above each pivot
// are reduced into [0, pivot). The result is a canonical basis, so two row
// lattices are equal iff their HNFs are identical.
IntMat hnf(IntMat m);

// Basis of the integer kernel {x : m * x == 0} (column vector convention,
// rows of the result are the kernel vectors). Kernels of integer matrices
// are saturated by construction.
IntMat kernel(const IntMat& m);

// Canonical basis of the saturation of the row span: (span_Q(rows) ∩ Z^n).
IntMat saturate(const IntMat& rows, int ambient_dim);

// Smith normal form: u * m * v == d with u, v unimodular and d diagonal
// with d[i] | d[i+1].
struct SmithResult {
    IntMat u, d, v;
};
SmithResult smith(IntMat m);

// Rank over Q of an integer matrix (fraction-free elimination).
int rank(IntMat m);

// Rank over Q of a rational matrix.
int rank(std::vector<RatVec> m);

// Does v lie in the Q-span of the rows?
bool in_span(const IntMat& rows, const IntVec& v);

// Exact feasibility of the strict system {a_i . x > 0}: returns a rational
// point in the open cone interior or nullopt. Fourier-Motzkin, exact over Q.
std::optional<RatVec> positive_witness(const std::vector<IntVec>& a, int dim);

// Feasibility of {a_i . x > 0 for all i} ∧ {b_j . x == 0 for all j}.
std::optional<RatVec> positive_witness_on_subspace(const std::vector<IntVec>& a,
                                                   const std::vector<IntVec>& eq,
                                                   int dim);

// Feasibility of {s_i . x > 0} ∧ {w_j . x >= 0}.
std::optional<RatVec> mixed_witness(const std::vector<IntVec>& strict,
                                    const std::vector<IntVec>& weak, int dim);

IntMat identity(int n);
IntMat mat_mul(const IntMat& a, const IntMat& b);
IntVec row_times_mat(const IntVec& x, const IntMat& m);

}  // namespace tkindex::linalg
