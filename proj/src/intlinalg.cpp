#include "tkindex/intlinalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace tkindex::linalg {

namespace {

void swap_rows(IntMat& m, int i, int j) { std::swap(m[i], m[j]); }

void negate_row(IntMat& m, int i) {
    for (Int& x : m[i]) x = -x;
}

// row[i] += c * row[j]
void add_row(IntMat& m, int i, int j, Int c) {
    for (size_t k = 0; k < m[i].size(); ++k) m[i][k] += c * m[j][k];
}

}  // namespace

IntMat identity(int n) {
    IntMat e(n, IntVec(n, 0));
    for (int i = 0; i < n; ++i) e[i][i] = 1;
    return e;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
    if (a.empty() || b.empty()) return {};
    size_t n = a.size(), k = b.size(), m = b[0].size();
    IntMat c(n, IntVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < k; ++j) {
            if (a[i][j] == 0) continue;
            for (size_t l = 0; l < m; ++l) c[i][l] += a[i][j] * b[j][l];
        }
    return c;
}

IntVec row_times_mat(const IntVec& x, const IntMat& m) {
    if (m.empty()) return {};
    IntVec r(m[0].size(), 0);
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < r.size(); ++j) r[j] += x[i] * m[i][j];
    }
    return r;
}

IntMat hnf(IntMat m) {
    if (m.empty()) return {};
    const int ncols = static_cast<int>(m[0].size());
    int row = 0;
    for (int col = 0; col < ncols && row < static_cast<int>(m.size()); ++col) {
        // Euclidean reduction within this column, below `row`.
        while (true) {
            int piv = -1;
            for (int i = row; i < static_cast<int>(m.size()); ++i) {
                if (m[i][col] != 0 && (piv == -1 || std::llabs(m[i][col]) < std::llabs(m[piv][col]))) piv = i;
            }
            if (piv == -1) break;
            swap_rows(m, row, piv);
            if (m[row][col] < 0) negate_row(m, row);
            bool clean = true;
            for (int i = row + 1; i < static_cast<int>(m.size()); ++i) {
                if (m[i][col] != 0) {
                    Int q = m[i][col] / m[row][col];
                    add_row(m, i, row, -q);
                    if (m[i][col] != 0) clean = false;
                }
            }
            if (clean) break;
        }
        if (row < static_cast<int>(m.size()) && m[row][col] != 0) {
            // Reduce entries above the pivot into [0, pivot).
            for (int i = 0; i < row; ++i) {
                Int q = m[i][col] >= 0 ? m[i][col] / m[row][col]
                                       : -((-m[i][col] + m[row][col] - 1) / m[row][col]);
                if (q != 0) add_row(m, i, row, -q);
            }
            ++row;
        }
    }
    m.resize(row);
    return m;
}

IntMat kernel(const IntMat& m) {
    if (m.empty()) return {};
    const int ncols = static_cast<int>(m[0].size());
    // Row-reduce the transpose with a tracked transform: u * m^T = h.
    IntMat t(ncols, IntVec(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (int j = 0; j < ncols; ++j) t[j][i] = m[i][j];
    IntMat u = identity(ncols);

    int row = 0;
    const int tcols = static_cast<int>(m.size());
    for (int col = 0; col < tcols && row < ncols; ++col) {
        while (true) {
            int piv = -1;
            for (int i = row; i < ncols; ++i)
                if (t[i][col] != 0 && (piv == -1 || std::llabs(t[i][col]) < std::llabs(t[piv][col]))) piv = i;
            if (piv == -1) break;
            swap_rows(t, row, piv);
            swap_rows(u, row, piv);
            bool clean = true;
            for (int i = row + 1; i < ncols; ++i) {
                if (t[i][col] != 0) {
                    Int q = t[i][col] / t[row][col];
                    add_row(t, i, row, -q);
                    add_row(u, i, row, -q);
                    if (t[i][col] != 0) clean = false;
                }
            }
            if (clean) break;
        }
        if (row < ncols && t[row][col] != 0) ++row;
    }
    IntMat ker;
    for (int i = row; i < ncols; ++i) ker.push_back(u[i]);
    return hnf(ker);
}

IntMat saturate(const IntMat& rows, int ambient_dim) {
    IntMat nonzero;
    for (const auto& r : rows)
        if (!is_zero_vec(r)) nonzero.push_back(r);
    if (nonzero.empty()) return {};
    IntMat ann = kernel(nonzero);
    if (ann.empty()) return hnf(identity(ambient_dim));
    return kernel(ann);
}

SmithResult smith(IntMat m) {
    const int nrows = static_cast<int>(m.size());
    const int ncols = nrows == 0 ? 0 : static_cast<int>(m[0].size());
    SmithResult res;
    res.u = identity(nrows);
    res.v = identity(ncols);
    if (nrows == 0 || ncols == 0) {
        res.d = m;
        return res;
    }

    auto col_op = [&](int j, int k, Int c) {  // col[j] += c * col[k]
        for (int i = 0; i < nrows; ++i) m[i][j] += c * m[i][k];
        for (int i = 0; i < ncols; ++i) res.v[i][j] += c * res.v[i][k];
    };
    auto col_swap = [&](int j, int k) {
        for (int i = 0; i < nrows; ++i) std::swap(m[i][j], m[i][k]);
        for (int i = 0; i < ncols; ++i) std::swap(res.v[i][j], res.v[i][k]);
    };
    auto col_neg = [&](int j) {
        for (int i = 0; i < nrows; ++i) m[i][j] = -m[i][j];
        for (int i = 0; i < ncols; ++i) res.v[i][j] = -res.v[i][j];
    };

    int t = 0;
    while (t < nrows && t < ncols) {
        // Find a pivot of minimal absolute value in the trailing block.
        int pi = -1, pj = -1;
        for (int i = t; i < nrows; ++i)
            for (int j = t; j < ncols; ++j)
                if (m[i][j] != 0 && (pi == -1 || std::llabs(m[i][j]) < std::llabs(m[pi][pj]))) { pi = i; pj = j; }
        if (pi == -1) break;
        swap_rows(m, t, pi);
        swap_rows(res.u, t, pi);
        col_swap(t, pj);
        if (m[t][t] < 0) { negate_row(m, t); negate_row(res.u, t); }

        bool dirty = false;
        for (int i = t + 1; i < nrows; ++i) {
            if (m[i][t] != 0) {
                Int q = m[i][t] / m[t][t];
                add_row(m, i, t, -q);
                add_row(res.u, i, t, -q);
                if (m[i][t] != 0) dirty = true;
            }
        }
        for (int j = t + 1; j < ncols; ++j) {
            if (m[t][j] != 0) {
                Int q = m[t][j] / m[t][t];
                col_op(j, t, -q);
                if (m[t][j] != 0) dirty = true;
            }
        }
        if (dirty) continue;  // re-pick a smaller pivot

        // Enforce divisibility of later entries by the pivot.
        bool fixed = false;
        for (int i = t + 1; i < nrows && !fixed; ++i)
            for (int j = t + 1; j < ncols && !fixed; ++j)
                if (m[i][j] % m[t][t] != 0) {
                    add_row(m, t, i, 1);
                    add_row(res.u, t, i, 1);
                    fixed = true;
                }
        if (fixed) continue;
        if (m[t][t] < 0) { negate_row(m, t); negate_row(res.u, t); }
        ++t;
    }
    (void)col_neg;
    res.d = m;
    return res;
}

int rank(IntMat m) {
    int r = 0;
    if (m.empty()) return 0;
    const int ncols = static_cast<int>(m[0].size());
    for (int col = 0; col < ncols && r < static_cast<int>(m.size()); ++col) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(m.size()); ++i)
            if (m[i][col] != 0) { piv = i; break; }
        if (piv == -1) continue;
        swap_rows(m, r, piv);
        for (int i = r + 1; i < static_cast<int>(m.size()); ++i) {
            if (m[i][col] == 0) continue;
            Int g = std::gcd(std::llabs(m[i][col]), std::llabs(m[r][col]));
            Int a = m[r][col] / g, b = m[i][col] / g;
            for (int k = col; k < ncols; ++k) m[i][k] = a * m[i][k] - b * m[r][k];
        }
        ++r;
    }
    return r;
}

int rank(std::vector<RatVec> m) {
    int r = 0;
    if (m.empty()) return 0;
    const int ncols = static_cast<int>(m[0].size());
    for (int col = 0; col < ncols && r < static_cast<int>(m.size()); ++col) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(m.size()); ++i)
            if (!m[i][col].is_zero()) { piv = i; break; }
        if (piv == -1) continue;
        std::swap(m[r], m[piv]);
        for (int i = r + 1; i < static_cast<int>(m.size()); ++i) {
            if (m[i][col].is_zero()) continue;
            Rat f = m[i][col] / m[r][col];
            for (int k = col; k < ncols; ++k) m[i][k] -= f * m[r][k];
        }
        ++r;
    }
    return r;
}

bool in_span(const IntMat& rows, const IntVec& v) {
    if (is_zero_vec(v)) return true;
    IntMat with = rows;
    with.push_back(v);
    return rank(rows) == rank(with);
}

namespace {

// Fourier-Motzkin on systems of strict constraints {a . x >= 1}; feasible
// iff the open cone {a . x > 0} is nonempty, and back-substitution yields
// an interior point.
std::optional<RatVec> fm_solve(std::vector<RatVec> rows, int dim) {
    // rows are (a_0 .. a_{dim-1} | c) meaning a . x >= c.
    std::vector<std::vector<RatVec>> stages;
    for (int var = dim - 1; var >= 0; --var) {
        stages.push_back(rows);
        std::vector<RatVec> pos, neg, zero;
        for (auto& r : rows) {
            if (r[var].sign() > 0) pos.push_back(r);
            else if (r[var].sign() < 0) neg.push_back(r);
            else zero.push_back(r);
        }
        std::vector<RatVec> next = zero;
        for (const auto& p : pos)
            for (const auto& n : neg) {
                // eliminate x_var between p and n
                RatVec comb(dim + 1);
                for (int k = 0; k <= dim; ++k) comb[k] = p[k] * (-n[var]) + n[k] * p[var];
                comb[var] = Rat(0);
                next.push_back(comb);
            }
        rows = std::move(next);
    }
    // All variables eliminated: rows are constraints 0 >= c.
    for (const auto& r : rows)
        if (Rat(0) < r[dim]) return std::nullopt;

    RatVec x(dim, Rat(0));
    for (int var = 0; var < dim; ++var) {
        const auto& stage = stages[dim - 1 - var];
        // bounds on x_var given x_{var+1..dim-1} already fixed
        bool has_lo = false, has_hi = false;
        Rat lo, hi;
        for (const auto& r : stage) {
            if (r[var].is_zero()) continue;
            Rat rest = r[dim];
            for (int k = 0; k < dim; ++k)
                if (k != var) rest -= r[k] * x[k];
            Rat bound = rest / r[var];
            if (r[var].sign() > 0) {
                if (!has_lo || lo < bound) { lo = bound; has_lo = true; }
            } else {
                if (!has_hi || bound < hi) { hi = bound; has_hi = true; }
            }
        }
        if (has_lo && has_hi) x[var] = (lo + hi) / Rat(2);
        else if (has_lo) x[var] = lo + Rat(1);
        else if (has_hi) x[var] = hi - Rat(1);
        else x[var] = Rat(0);
    }
    return x;
}

}  // namespace

std::optional<RatVec> positive_witness(const std::vector<IntVec>& a, int dim) {
    for (const auto& v : a)
        if (is_zero_vec(v)) return std::nullopt;
    std::vector<RatVec> rows;
    rows.reserve(a.size());
    for (const auto& v : a) {
        RatVec r(dim + 1);
        for (int k = 0; k < dim; ++k) r[k] = Rat(v[k]);
        r[dim] = Rat(1);
        rows.push_back(std::move(r));
    }
    return fm_solve(std::move(rows), dim);
}

std::optional<RatVec> mixed_witness(const std::vector<IntVec>& strict,
                                    const std::vector<IntVec>& weak, int dim) {
    for (const auto& v : strict)
        if (is_zero_vec(v)) return std::nullopt;
    std::vector<RatVec> rows;
    rows.reserve(strict.size() + weak.size());
    for (const auto& v : strict) {
        RatVec r(dim + 1);
        for (int k = 0; k < dim; ++k) r[k] = Rat(v[k]);
        r[dim] = Rat(1);
        rows.push_back(std::move(r));
    }
    for (const auto& v : weak) {
        RatVec r(dim + 1);
        for (int k = 0; k < dim; ++k) r[k] = Rat(v[k]);
        r[dim] = Rat(0);
        rows.push_back(std::move(r));
    }
    return fm_solve(std::move(rows), dim);
}

std::optional<RatVec> positive_witness_on_subspace(const std::vector<IntVec>& a,
                                                   const std::vector<IntVec>& eq,
                                                   int dim) {
    // Parametrize the solution set of the equalities by the integer kernel
    // and solve the strict system in those coordinates.
    IntMat ker = eq.empty() ? identity(dim) : kernel(eq);
    if (ker.empty()) {
        if (!a.empty()) return std::nullopt;
        return RatVec(dim, Rat(0));
    }
    const int k = static_cast<int>(ker.size());
    std::vector<IntVec> proj;
    proj.reserve(a.size());
    for (const auto& v : a) {
        IntVec row(k);
        for (int i = 0; i < k; ++i) row[i] = dot(ker[i], v);
        proj.push_back(std::move(row));
    }
    auto sol = positive_witness(proj, k);
    if (!sol) return std::nullopt;
    RatVec x(dim, Rat(0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < dim; ++j) x[j] += (*sol)[i] * Rat(ker[i][j]);
    return x;
}

}  // namespace tkindex::linalg
