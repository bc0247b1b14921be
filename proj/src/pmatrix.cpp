#include "exlat/pmatrix.hpp"

#include <algorithm>

namespace exlat {

PMat pm_mul(const PCtx& R, const PMat& A, const PMat& B) {
    assert(A.cols == B.rows);
    PMat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            int64_t aik = A.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < B.cols; ++j)
                if (B.at(k, j) != 0)
                    C.at(i, j) = R.add(C.at(i, j), R.mul(aik, B.at(k, j)));
        }
    return C;
}

PMat pm_add(const PCtx& R, const PMat& A, const PMat& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    PMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = R.add(A.a[i], B.a[i]);
    return C;
}

PMat pm_sub(const PCtx& R, const PMat& A, const PMat& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    PMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = R.sub(A.a[i], B.a[i]);
    return C;
}

PMat pm_hcat(const PMat& A, const PMat& B) {
    assert(A.rows == B.rows);
    PMat C(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
    }
    return C;
}

PMat pm_vcat(const PMat& A, const PMat& B) {
    assert(A.cols == B.cols);
    PMat C(A.rows + B.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(A.rows + i, j) = B.at(i, j);
    return C;
}

bool pm_equal(const PCtx& R, const PMat& A, const PMat& B) {
    if (A.rows != B.rows || A.cols != B.cols) return false;
    for (size_t i = 0; i < A.a.size(); ++i)
        if (R.reduce(A.a[i]) != R.reduce(B.a[i])) return false;
    return true;
}

bool pm_is_zero(const PCtx& R, const PMat& A) {
    for (int64_t x : A.a)
        if (!R.is_zero(x)) return false;
    return true;
}

Snf pm_snf(const PCtx& R, const PMat& A) {
    Snf s;
    s.d = A;
    s.u = PMat::identity(A.rows);
    s.v = PMat::identity(A.cols);
    s.uinv = PMat::identity(A.rows);
    s.vinv = PMat::identity(A.cols);
    PMat& D = s.d;
    int n = std::min(A.rows, A.cols);

    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        for (int c = 0; c < D.cols; ++c) std::swap(D.at(i, c), D.at(j, c));
        for (int c = 0; c < s.u.cols; ++c) std::swap(s.u.at(i, c), s.u.at(j, c));
        for (int r = 0; r < s.uinv.rows; ++r) std::swap(s.uinv.at(r, i), s.uinv.at(r, j));
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < D.rows; ++r) std::swap(D.at(r, i), D.at(r, j));
        for (int r = 0; r < s.v.rows; ++r) std::swap(s.v.at(r, i), s.v.at(r, j));
        for (int c = 0; c < s.vinv.cols; ++c) std::swap(s.vinv.at(i, c), s.vinv.at(j, c));
    };
    // row_i += f * row_j ; U tracks left ops, Uinv the inverse column ops
    auto addrow = [&](int i, int j, int64_t f) {
        for (int c = 0; c < D.cols; ++c) D.at(i, c) = R.add(D.at(i, c), R.mul(f, D.at(j, c)));
        for (int c = 0; c < s.u.cols; ++c) s.u.at(i, c) = R.add(s.u.at(i, c), R.mul(f, s.u.at(j, c)));
        for (int r = 0; r < s.uinv.rows; ++r) s.uinv.at(r, j) = R.sub(s.uinv.at(r, j), R.mul(f, s.uinv.at(r, i)));
    };
    auto addcol = [&](int i, int j, int64_t f) { // col_i += f * col_j
        for (int r = 0; r < D.rows; ++r) D.at(r, i) = R.add(D.at(r, i), R.mul(f, D.at(r, j)));
        for (int r = 0; r < s.v.rows; ++r) s.v.at(r, i) = R.add(s.v.at(r, i), R.mul(f, s.v.at(r, j)));
        for (int c = 0; c < s.vinv.cols; ++c) s.vinv.at(j, c) = R.sub(s.vinv.at(j, c), R.mul(f, s.vinv.at(i, c)));
    };
    auto scale_row = [&](int i, int64_t uu) { // unit scale
        for (int c = 0; c < D.cols; ++c) D.at(i, c) = R.mul(uu, D.at(i, c));
        for (int c = 0; c < s.u.cols; ++c) s.u.at(i, c) = R.mul(uu, s.u.at(i, c));
        int64_t ui = R.inv_unit(uu);
        for (int r = 0; r < s.uinv.rows; ++r) s.uinv.at(r, i) = R.mul(ui, s.uinv.at(r, i));
    };

    for (int t = 0; t < n; ++t) {
        // find min-valuation pivot in D[t.., t..]
        int bi = -1, bj = -1, bv = R.k;
        for (int i = t; i < D.rows; ++i)
            for (int j = t; j < D.cols; ++j) {
                int v = R.val(D.at(i, j));
                if (v < bv) { bv = v; bi = i; bj = j; }
            }
        if (bi < 0 || bv >= R.k) break; // rest is zero
        swap_rows(t, bi);
        swap_cols(t, bj);
        // clear row and column by exact division (pivot has min valuation)
        for (int i = t + 1; i < D.rows; ++i)
            if (!R.is_zero(D.at(i, t)))
                addrow(i, t, R.neg(R.divide(D.at(i, t), D.at(t, t))));
        for (int j = t + 1; j < D.cols; ++j)
            if (!R.is_zero(D.at(t, j)))
                addcol(j, t, R.neg(R.divide(D.at(t, j), D.at(t, t))));
        // normalize pivot to a pure p-power
        int64_t u = R.unit_part(D.at(t, t));
        scale_row(t, R.inv_unit(u));
    }
    s.diag_vals.assign(n, R.k);
    for (int t = 0; t < n; ++t) s.diag_vals[t] = R.val(D.at(t, t));
    return s;
}

static PMat augment_with_annihilators(const PCtx& R, const PMat& A, const std::vector<int>& row_ann) {
    // columns p^rho_i e_i appended for rows with rho_i < k
    int extra = 0;
    for (int rho : row_ann)
        if (rho < R.k) ++extra;
    PMat B(A.rows, A.cols + extra);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) B.at(i, j) = A.at(i, j);
    int c = A.cols;
    for (int i = 0; i < A.rows; ++i)
        if (row_ann[i] < R.k) B.at(i, c++) = R.pow_p(row_ann[i]);
    return B;
}

std::optional<std::vector<int64_t>>
pm_solve(const PCtx& R, const PMat& A, const std::vector<int64_t>& b,
         const std::vector<int>& row_ann) {
    assert((int)b.size() == A.rows && (int)row_ann.size() == A.rows);
    PMat B = augment_with_annihilators(R, A, row_ann);
    Snf s = pm_snf(R, B);
    // solve D y = U b, then x = V y (first A.cols coordinates)
    std::vector<int64_t> ub(B.rows, 0);
    for (int i = 0; i < B.rows; ++i) {
        int64_t acc = 0;
        for (int j = 0; j < B.rows; ++j) acc = R.add(acc, R.mul(s.u.at(i, j), b[j]));
        ub[i] = acc;
    }
    int n = std::min(B.rows, B.cols);
    std::vector<int64_t> y(B.cols, 0);
    for (int i = 0; i < B.rows; ++i) {
        int64_t rhs = ub[i];
        if (i < n && !R.is_zero(s.d.at(i, i))) {
            if (R.val(rhs) < R.val(s.d.at(i, i))) return std::nullopt;
            y[i] = R.divide(rhs, s.d.at(i, i));
        } else {
            if (!R.is_zero(rhs)) return std::nullopt;
        }
    }
    std::vector<int64_t> x(A.cols, 0);
    for (int i = 0; i < A.cols; ++i) {
        int64_t acc = 0;
        for (int j = 0; j < B.cols; ++j) acc = R.add(acc, R.mul(s.v.at(i, j), y[j]));
        x[i] = acc;
    }
    return x;
}

PMat pm_kernel(const PCtx& R, const PMat& A, const std::vector<int>& row_ann,
               const std::vector<int>& col_ann) {
    PMat B = augment_with_annihilators(R, A, row_ann);
    Snf s = pm_snf(R, B);
    int n = std::min(B.rows, B.cols);
    int theta = 2 * R.k / 3; // artifact scale: honest valuations stay far below
    // solutions of D y = 0: y_i generated by p^(k - val(d_i)) for i < n, free beyond
    std::vector<std::vector<int64_t>> gens;
    for (int i = 0; i < B.cols; ++i) {
        int v = (i < n) ? s.diag_vals[i] : R.k;
        int need = R.k - v; // p^need * e_i in kernel
        if (need >= R.k) continue; // only zero
        std::vector<int64_t> y(B.cols, 0);
        y[i] = R.pow_p(need);
        gens.push_back(std::move(y));
    }
    std::vector<std::vector<int64_t>> cols;
    for (auto& g : gens) {
        std::vector<int64_t> x(A.cols, 0);
        bool honest = false;
        for (int i = 0; i < A.cols; ++i) {
            int64_t acc = 0;
            for (int j = 0; j < B.cols; ++j) acc = R.add(acc, R.mul(s.v.at(i, j), g[j]));
            int ai = col_ann.empty() ? R.k : col_ann[i];
            if (ai < R.k) acc = R.reduce(acc) % R.pow_p(ai);
            x[i] = acc;
            if (R.val(acc) < std::min(ai, theta)) honest = true;
        }
        if (honest) cols.push_back(std::move(x));
    }
    PMat K(A.cols, (int)cols.size());
    for (int g = 0; g < (int)cols.size(); ++g)
        for (int i = 0; i < A.cols; ++i) K.at(i, g) = cols[g][i];
    return K;
}

CokerShape pm_coker(const PCtx& R, const PMat& A, const std::vector<int>& row_ann) {
    PMat B = augment_with_annihilators(R, A, row_ann);
    Snf s = pm_snf(R, B);
    int n = std::min(B.rows, B.cols);
    CokerShape sh;
    std::vector<int> tor;
    for (int i = 0; i < B.rows; ++i) {
        int v = (i < n) ? s.diag_vals[i] : R.k;
        if (v == 0) continue;
        if (v >= R.k) sh.free_rank++;
        else tor.push_back(v);
    }
    std::sort(tor.rbegin(), tor.rend());
    sh.torsion_exps = std::move(tor);
    return sh;
}

bool pm_surjective(const PCtx& R, const PMat& A, const std::vector<int>& row_ann) {
    CokerShape sh = pm_coker(R, A, row_ann);
    return sh.free_rank == 0 && sh.torsion_exps.empty();
}

} // namespace exlat
