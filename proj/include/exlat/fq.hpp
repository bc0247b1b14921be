#pragma once

// Dense linear algebra over small fields, shared by the quiver modules: the
// prime field F_q and the rational function field F_q(T) (for the generic
// Kronecker point). One Gaussian elimination, parametrized by the field.

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace exlat {

// ----------------------------------------------------------------- F_q -----

struct FqField {
    using Elem = int64_t;
    int64_t q = 5;

    FqField() = default;
    explicit FqField(int64_t q_) : q(q_) {
        if (q < 2) throw std::invalid_argument("FqField: q >= 2");
        for (int64_t d = 2; d * d <= q; ++d)
            if (q % d == 0) throw std::invalid_argument("FqField: q must be prime");
    }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(int64_t x) const { return ((x % q) + q) % q; }
    Elem add(Elem a, Elem b) const { return (a + b) % q; }
    Elem sub(Elem a, Elem b) const { return ((a - b) % q + q) % q; }
    Elem mul(Elem a, Elem b) const { return (a * b) % q; }
    Elem neg(Elem a) const { return (q - a) % q; }
    bool is_zero(Elem a) const { return a % q == 0; }
    bool equal(Elem a, Elem b) const { return (a - b) % q == 0; }
    Elem inv(Elem a) const {
        a = from_int(a);
        if (a == 0) throw std::invalid_argument("FqField: inverse of zero");
        Elem r = 1, base = a;
        int64_t e = q - 2;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    // a generator of the multiplicative group
    Elem primitive_root() const {
        for (Elem g = 2; g < q; ++g) {
            Elem x = g;
            int64_t ord = 1;
            while (x != 1) { x = mul(x, g); ++ord; }
            if (ord == q - 1) return g;
        }
        return 1; // q = 2
    }
};

// ------------------------------------------------------------- F_q[T] ------

struct FqPoly {
    std::vector<int64_t> c; // coefficients, c[i] * T^i, normalized (no top zeros)
    bool is_zero() const { return c.empty(); }
    int deg() const { return (int)c.size() - 1; }
    auto operator<=>(const FqPoly&) const = default;
};

FqPoly poly_trim(const FqField& F, FqPoly p);
FqPoly poly_from(const FqField& F, std::vector<int64_t> coeffs);
FqPoly poly_add(const FqField& F, const FqPoly& a, const FqPoly& b);
FqPoly poly_sub(const FqField& F, const FqPoly& a, const FqPoly& b);
FqPoly poly_mul(const FqField& F, const FqPoly& a, const FqPoly& b);
// division with remainder: a = q*b + r
std::pair<FqPoly, FqPoly> poly_divmod(const FqField& F, const FqPoly& a, const FqPoly& b);
FqPoly poly_gcd(const FqField& F, FqPoly a, FqPoly b); // monic
FqPoly poly_monic(const FqField& F, const FqPoly& a);

// ------------------------------------------------------------- F_q(T) ------

struct FuncField {
    struct Elem {
        FqPoly num, den; // den monic, gcd(num, den) = 1; zero = (0, 1)
        auto operator<=>(const Elem&) const = default;
    };
    FqField base;

    FuncField() = default;
    explicit FuncField(int64_t q) : base(q) {}

    Elem zero() const { return {FqPoly{}, poly_from(base, {1})}; }
    Elem one() const { return {poly_from(base, {1}), poly_from(base, {1})}; }
    Elem T() const { return {poly_from(base, {0, 1}), poly_from(base, {1})}; }
    Elem from_int(int64_t x) const { return {poly_from(base, {base.from_int(x)}), poly_from(base, {1})}; }
    Elem make(const FqPoly& num, const FqPoly& den) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem inv(const Elem& a) const;
    bool is_zero(const Elem& a) const { return a.num.is_zero(); }
    bool equal(const Elem& a, const Elem& b) const;
};

// ------------------------------------------------------------- matrices ----

template <class F>
struct FMat {
    using E = typename F::Elem;
    int rows = 0, cols = 0;
    std::vector<E> a;

    FMat() = default;
    FMat(int r, int c, E zero) : rows(r), cols(c), a((size_t)r * c, zero) {}
    E& at(int i, int j) { return a[(size_t)i * cols + j]; }
    const E& at(int i, int j) const { return a[(size_t)i * cols + j]; }
};

template <class F>
FMat<F> fmat_zero(const F& k, int r, int c) {
    return FMat<F>(r, c, k.zero());
}

template <class F>
FMat<F> fmat_identity(const F& k, int n) {
    FMat<F> m = fmat_zero(k, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = k.one();
    return m;
}

template <class F>
FMat<F> fmat_mul(const F& k, const FMat<F>& A, const FMat<F>& B) {
    assert(A.cols == B.rows);
    FMat<F> C = fmat_zero(k, A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int t = 0; t < A.cols; ++t) {
            if (k.is_zero(A.at(i, t))) continue;
            for (int j = 0; j < B.cols; ++j)
                C.at(i, j) = k.add(C.at(i, j), k.mul(A.at(i, t), B.at(t, j)));
        }
    return C;
}

template <class F>
FMat<F> fmat_add(const F& k, const FMat<F>& A, const FMat<F>& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    FMat<F> C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = k.add(C.a[i], B.a[i]);
    return C;
}

template <class F>
FMat<F> fmat_sub(const F& k, const FMat<F>& A, const FMat<F>& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    FMat<F> C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = k.sub(C.a[i], B.a[i]);
    return C;
}

template <class F>
bool fmat_equal(const F& k, const FMat<F>& A, const FMat<F>& B) {
    if (A.rows != B.rows || A.cols != B.cols) return false;
    for (size_t i = 0; i < A.a.size(); ++i)
        if (!k.equal(A.a[i], B.a[i])) return false;
    return true;
}

// reduced row echelon form in place; returns pivot columns
template <class F>
std::vector<int> fmat_rref(const F& k, FMat<F>& A) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < A.cols && r < A.rows; ++c) {
        int sel = -1;
        for (int i = r; i < A.rows; ++i)
            if (!k.is_zero(A.at(i, c))) { sel = i; break; }
        if (sel < 0) continue;
        for (int j = 0; j < A.cols; ++j) std::swap(A.at(sel, j), A.at(r, j));
        auto iv = k.inv(A.at(r, c));
        for (int j = 0; j < A.cols; ++j) A.at(r, j) = k.mul(A.at(r, j), iv);
        for (int i = 0; i < A.rows; ++i) {
            if (i == r || k.is_zero(A.at(i, c))) continue;
            auto f = A.at(i, c);
            for (int j = 0; j < A.cols; ++j)
                A.at(i, j) = k.sub(A.at(i, j), k.mul(f, A.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class F>
int fmat_rank(const F& k, FMat<F> A) {
    return (int)fmat_rref(k, A).size();
}

// basis of the right nullspace, as columns
template <class F>
FMat<F> fmat_nullspace(const F& k, FMat<F> A) {
    int n = A.cols;
    std::vector<int> piv = fmat_rref(k, A);
    std::vector<char> is_piv(n, 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    FMat<F> N = fmat_zero(k, n, (int)free_cols.size());
    for (size_t t = 0; t < free_cols.size(); ++t) {
        int fc = free_cols[t];
        N.at(fc, (int)t) = k.one();
        for (size_t r = 0; r < piv.size(); ++r)
            N.at(piv[r], (int)t) = k.neg(A.at((int)r, fc));
    }
    return N;
}

// solve A x = b; returns one solution
template <class F>
std::optional<std::vector<typename F::Elem>>
fmat_solve(const F& k, FMat<F> A, std::vector<typename F::Elem> b) {
    assert((int)b.size() == A.rows);
    int n = A.cols;
    FMat<F> Ab = fmat_zero(k, A.rows, n + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < n; ++j) Ab.at(i, j) = A.at(i, j);
        Ab.at(i, n) = b[i];
    }
    std::vector<int> piv = fmat_rref(k, Ab);
    for (int c : piv)
        if (c == n) return std::nullopt; // inconsistent
    std::vector<typename F::Elem> x(n, k.zero());
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = Ab.at((int)r, n);
    return x;
}

template <class F>
bool fmat_is_invertible(const F& k, const FMat<F>& A) {
    if (A.rows != A.cols) return false;
    return fmat_rank(k, A) == A.rows;
}

template <class F>
FMat<F> fmat_inverse(const F& k, const FMat<F>& A) {
    assert(A.rows == A.cols);
    int n = A.rows;
    FMat<F> Ab = fmat_zero(k, n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) Ab.at(i, j) = A.at(i, j);
        Ab.at(i, n + i) = k.one();
    }
    auto piv = fmat_rref(k, Ab);
    if ((int)piv.size() != n) throw std::invalid_argument("fmat_inverse: singular");
    FMat<F> inv = fmat_zero(k, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = Ab.at(i, n + j);
    return inv;
}

using FqMat = FMat<FqField>;
using FFMat = FMat<FuncField>;

} // namespace exlat
