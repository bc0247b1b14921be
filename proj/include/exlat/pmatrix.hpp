#pragma once

// Dense matrices over the truncated local ring R/p^K, with Smith normal form
// by minimum-valuation pivoting (R is local, so divisibility is total and no
// Bezout steps are needed). Transforms are tracked so presentations and maps
// can be normalized, and linear systems with per-row/column annihilators can
// be solved.

#include "exlat/padic.hpp"

#include <optional>
#include <vector>

namespace exlat {

struct PMat {
    int rows = 0, cols = 0;
    std::vector<int64_t> a; // row-major

    PMat() = default;
    PMat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}

    int64_t& at(int i, int j) { return a[size_t(i) * cols + j]; }
    int64_t at(int i, int j) const { return a[size_t(i) * cols + j]; }

    static PMat identity(int n) {
        PMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static PMat zero(int r, int c) { return PMat(r, c); }
};

PMat pm_mul(const PCtx& R, const PMat& A, const PMat& B);
PMat pm_add(const PCtx& R, const PMat& A, const PMat& B);
PMat pm_sub(const PCtx& R, const PMat& A, const PMat& B);
PMat pm_hcat(const PMat& A, const PMat& B);
PMat pm_vcat(const PMat& A, const PMat& B);
bool pm_equal(const PCtx& R, const PMat& A, const PMat& B);
bool pm_is_zero(const PCtx& R, const PMat& A);

// Smith normal form: U*A*V = D with U, V invertible over R/p^K and
// D diagonal with nondecreasing valuations.
struct Snf {
    PMat d, u, v;                 // u*a*v = d
    PMat uinv, vinv;              // inverses, tracked exactly
    std::vector<int> diag_vals;   // valuations of the diagonal (k = zero)
};

Snf pm_snf(const PCtx& R, const PMat& A);

// Solve A*x = b in the module  (⊕_j R/p^mu_j)  <- x,  relations p^rho_i on rows:
// i.e. find x with A x ≡ b modulo the row lattice spanned by p^rho_i e_i.
// mu/rho entries of R.k mean "free" (no annihilator).
// Returns one solution (coordinates reduced mod p^mu_j) or nullopt.
std::optional<std::vector<int64_t>>
pm_solve(const PCtx& R, const PMat& A, const std::vector<int64_t>& b,
         const std::vector<int>& row_ann);

// Generators of the solution set of A x ≡ 0 (mod row annihilators), as
// columns. Solutions are elements of the source module with coordinate
// annihilators col_ann (R.k = free); generators that are zero there, or whose
// every coordinate sits at artifact scale (valuation >= 2k/3, a truncation
// echo), are dropped. Empty col_ann means all free.
PMat pm_kernel(const PCtx& R, const PMat& A, const std::vector<int>& row_ann,
               const std::vector<int>& col_ann = {});

// Invariant factors (valuations, ascending, zeros/units omitted) of the
// cokernel of A as a map into ⊕_i R/p^rho_i. Entries equal to R.k denote
// free summands Z_p (rank of cokernel).
struct CokerShape {
    std::vector<int> torsion_exps; // descending
    int free_rank = 0;
};
CokerShape pm_coker(const PCtx& R, const PMat& A, const std::vector<int>& row_ann);

// True if the columns of A generate the full module ⊕_i R/p^rho_i.
bool pm_surjective(const PCtx& R, const PMat& A, const std::vector<int>& row_ann);

} // namespace exlat
