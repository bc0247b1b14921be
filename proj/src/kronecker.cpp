#include "exlat/kronecker.hpp"

#include <algorithm>
#include <stdexcept>

namespace exlat::kron {

std::string label_name(const IndecLabel& l) {
    switch (l.kind) {
    case IndecLabel::Kind::Preproj: return "P" + std::to_string(l.n);
    case IndecLabel::Kind::Preinj: return "Q" + std::to_string(l.n);
    default: break;
    }
    std::string lam = "S_" + std::to_string(l.lambda);
    return lam + "[" + std::to_string(l.k) + "]";
}

std::pair<int, int> label_dims(const IndecLabel& l) {
    switch (l.kind) {
    case IndecLabel::Kind::Preproj: return {l.n + 1, l.n};
    case IndecLabel::Kind::Preinj: return {l.n, l.n + 1};
    default: return {l.k, l.k};
    }
}

std::string point_name(const KZieglerPoint& p) {
    switch (p.kind) {
    case KZieglerPoint::Kind::FiniteDim: return label_name(p.fin);
    case KZieglerPoint::Kind::Pruefer: return "S_" + std::to_string(p.lambda) + "[inf]";
    case KZieglerPoint::Kind::Adic: return "adic_" + std::to_string(p.lambda);
    default: return "G";
    }
}

int euler(const std::pair<int, int>& x, const std::pair<int, int>& y) {
    return x.first * y.first + x.second * y.second - 2 * x.second * y.first;
}

// ------------------------------------------------------ templated layer ----

template <class F>
std::vector<KMor<F>> khom_basis(const F& k, const KRep<F>& X, const KRep<F>& Y) {
    int n1 = Y.d1 * X.d1, n2 = Y.d2 * X.d2;
    int nvars = n1 + n2;
    if (nvars == 0) return {};
    int neqs = 2 * Y.d1 * X.d2;
    FMat<F> M = fmat_zero(k, std::max(neqs, 1), nvars);
    int row = 0;
    auto fill = [&](const FMat<F>& Xm, const FMat<F>& Ym) {
        // f1 * Xm - Ym * f2 = 0, equation (i, j), i < Y.d1, j < X.d2
        for (int i = 0; i < Y.d1; ++i)
            for (int j = 0; j < X.d2; ++j) {
                for (int t = 0; t < X.d1; ++t)
                    M.at(row, i * X.d1 + t) = k.add(M.at(row, i * X.d1 + t), Xm.at(t, j));
                for (int t = 0; t < Y.d2; ++t)
                    M.at(row, n1 + t * X.d2 + j) =
                        k.sub(M.at(row, n1 + t * X.d2 + j), Ym.at(i, t));
                ++row;
            }
    };
    fill(X.alpha, Y.alpha);
    fill(X.beta, Y.beta);
    FMat<F> N = fmat_nullspace(k, M);
    std::vector<KMor<F>> out;
    for (int c = 0; c < N.cols; ++c) {
        KMor<F> f{fmat_zero(k, Y.d1, X.d1), fmat_zero(k, Y.d2, X.d2)};
        for (int i = 0; i < Y.d1; ++i)
            for (int t = 0; t < X.d1; ++t) f.f1.at(i, t) = N.at(i * X.d1 + t, c);
        for (int i = 0; i < Y.d2; ++i)
            for (int t = 0; t < X.d2; ++t) f.f2.at(i, t) = N.at(n1 + i * X.d2 + t, c);
        out.push_back(std::move(f));
    }
    return out;
}

template <class F>
std::vector<typename F::Elem> kflatten(const F& k, const KRep<F>& C, const KRep<F>& A,
                                       const FMat<F>& za, const FMat<F>& zb) {
    (void)k;
    std::vector<typename F::Elem> v;
    for (int i = 0; i < A.d1; ++i)
        for (int j = 0; j < C.d2; ++j) v.push_back(za.at(i, j));
    for (int i = 0; i < A.d1; ++i)
        for (int j = 0; j < C.d2; ++j) v.push_back(zb.at(i, j));
    return v;
}

template <class F>
std::pair<FMat<F>, FMat<F>> kunflatten(const F& k, const KRep<F>& C, const KRep<F>& A,
                                       const std::vector<typename F::Elem>& v) {
    FMat<F> za = fmat_zero(k, A.d1, C.d2), zb = fmat_zero(k, A.d1, C.d2);
    size_t t = 0;
    for (int i = 0; i < A.d1; ++i)
        for (int j = 0; j < C.d2; ++j) za.at(i, j) = v[t++];
    for (int i = 0; i < A.d1; ++i)
        for (int j = 0; j < C.d2; ++j) zb.at(i, j) = v[t++];
    return {za, zb};
}

template <class F>
KExtPres<F> kext_pres(const F& k, const KRep<F>& C, const KRep<F>& A) {
    KExtPres<F> P;
    P.cocycle_len = 2 * A.d1 * C.d2;
    if (P.cocycle_len == 0) return P;
    int nf = A.d1 * C.d1 + A.d2 * C.d2;
    std::vector<std::vector<typename F::Elem>> gens;
    for (int var = 0; var < nf; ++var) {
        FMat<F> f1 = fmat_zero(k, A.d1, C.d1), f2 = fmat_zero(k, A.d2, C.d2);
        if (var < A.d1 * C.d1) f1.at(var / std::max(C.d1, 1), var % std::max(C.d1, 1)) = k.one();
        else {
            int w = var - A.d1 * C.d1;
            f2.at(w / std::max(C.d2, 1), w % std::max(C.d2, 1)) = k.one();
        }
        FMat<F> za = fmat_sub(k, fmat_mul(k, f1, C.alpha), fmat_mul(k, A.alpha, f2));
        FMat<F> zb = fmat_sub(k, fmat_mul(k, f1, C.beta), fmat_mul(k, A.beta, f2));
        gens.push_back(kflatten(k, C, A, za, zb));
    }
    FMat<F> G = fmat_zero(k, std::max(nf, 1), P.cocycle_len);
    for (int r = 0; r < nf; ++r)
        for (int c = 0; c < P.cocycle_len; ++c) G.at(r, c) = gens[r][c];
    P.piv = fmat_rref(k, G);
    P.reducer = G;
    std::vector<char> is_piv(P.cocycle_len, 0);
    for (int c : P.piv) is_piv[c] = 1;
    for (int c = 0; c < P.cocycle_len; ++c)
        if (!is_piv[c]) P.coord_pos.push_back(c);
    P.dim = (int)P.coord_pos.size();
    return P;
}

template <class F>
std::vector<typename F::Elem> kreduce(const F& k, const KExtPres<F>& P,
                                      std::vector<typename F::Elem> v) {
    for (size_t r = 0; r < P.piv.size(); ++r) {
        auto f = v[P.piv[r]];
        if (k.is_zero(f)) continue;
        for (int c = 0; c < P.cocycle_len; ++c)
            v[c] = k.sub(v[c], k.mul(f, P.reducer.at((int)r, c)));
    }
    std::vector<typename F::Elem> coords;
    for (int c : P.coord_pos) coords.push_back(v[c]);
    return coords;
}

// ------------------------------------------------------------- builders ----

KRep<FqField> KCat::rep(const IndecLabel& l) const {
    KRep<FqField> X;
    auto [d1, d2] = label_dims(l);
    X.d1 = d1;
    X.d2 = d2;
    X.alpha = fmat_zero(F, d1, d2);
    X.beta = fmat_zero(F, d1, d2);
    switch (l.kind) {
    case IndecLabel::Kind::Preproj:
        for (int i = 0; i < l.n; ++i) {
            X.alpha.at(i, i) = 1;
            X.beta.at(i + 1, i) = 1;
        }
        break;
    case IndecLabel::Kind::Preinj:
        for (int i = 0; i < l.n; ++i) X.alpha.at(i, i) = 1;
        for (int i = 0; i < l.n; ++i) X.beta.at(i, i + 1) = 1;
        break;
    case IndecLabel::Kind::Regular:
        if (l.lambda < (int)F.q) {
            for (int i = 0; i < l.k; ++i) {
                X.alpha.at(i, i) = 1;
                X.beta.at(i, i) = F.from_int(l.lambda);
                if (i + 1 < l.k) X.beta.at(i + 1, i) = 1;
            }
        } else { // infinity
            for (int i = 0; i < l.k; ++i) {
                X.beta.at(i, i) = 1;
                if (i + 1 < l.k) X.alpha.at(i + 1, i) = 1;
            }
        }
        break;
    }
    return X;
}

KRep<FqField> KCat::sum(const KRep<FqField>& a, const KRep<FqField>& b) const {
    KRep<FqField> s;
    s.d1 = a.d1 + b.d1;
    s.d2 = a.d2 + b.d2;
    s.alpha = fmat_zero(F, s.d1, s.d2);
    s.beta = fmat_zero(F, s.d1, s.d2);
    for (int i = 0; i < a.d1; ++i)
        for (int j = 0; j < a.d2; ++j) {
            s.alpha.at(i, j) = a.alpha.at(i, j);
            s.beta.at(i, j) = a.beta.at(i, j);
        }
    for (int i = 0; i < b.d1; ++i)
        for (int j = 0; j < b.d2; ++j) {
            s.alpha.at(a.d1 + i, a.d2 + j) = b.alpha.at(i, j);
            s.beta.at(a.d1 + i, a.d2 + j) = b.beta.at(i, j);
        }
    return s;
}

KRep<FqField> KCat::rep_of(const std::vector<IndecLabel>& m) const {
    KRep<FqField> s = zero_rep();
    s.alpha = fmat_zero(F, 0, 0);
    s.beta = fmat_zero(F, 0, 0);
    for (const auto& l : m) s = sum(s, rep(l));
    return s;
}

int KCat::hom_dim(const KRep<FqField>& X, const KRep<FqField>& Y) const {
    return (int)khom_basis(F, X, Y).size();
}

int KCat::ext_dim(const KRep<FqField>& X, const KRep<FqField>& Y) const {
    int via_euler = hom_dim(X, Y) - euler({X.d1, X.d2}, {Y.d1, Y.d2});
    int via_defect = kext_pres(F, X, Y).dim;
    if (via_euler != via_defect)
        throw std::logic_error("ext_dim: Euler and defect-map routes disagree");
    return via_defect;
}

bool KCat::end_is_local(const KRep<FqField>& X, size_t cap) const {
    auto basis = khom_basis(F, X, X);
    size_t d = basis.size();
    __int128 total = 1;
    for (size_t i = 0; i < d; ++i) {
        total *= F.q;
        if (total > (__int128)cap)
            throw std::invalid_argument("end_is_local: endomorphism algebra too large");
    }
    std::vector<int64_t> c(d, 0);
    while (true) {
        size_t i = 0;
        while (i < d && ++c[i] == F.q) c[i++] = 0;
        if (i == d) break;
        KMor<FqField> e{fmat_zero(F, X.d1, X.d1), fmat_zero(F, X.d2, X.d2)};
        for (size_t t = 0; t < d; ++t) {
            if (!c[t]) continue;
            for (size_t w = 0; w < e.f1.a.size(); ++w)
                e.f1.a[w] = F.add(e.f1.a[w], F.mul(c[t], basis[t].f1.a[w]));
            for (size_t w = 0; w < e.f2.a.size(); ++w)
                e.f2.a[w] = F.add(e.f2.a[w], F.mul(c[t], basis[t].f2.a[w]));
        }
        bool is_id = fmat_equal(F, e.f1, fmat_identity(F, X.d1)) &&
                     fmat_equal(F, e.f2, fmat_identity(F, X.d2));
        if (is_id) continue;
        if (fmat_equal(F, fmat_mul(F, e.f1, e.f1), e.f1) &&
            fmat_equal(F, fmat_mul(F, e.f2, e.f2), e.f2))
            return false; // nontrivial idempotent
    }
    return true;
}

IndecLabel KCat::certify_indec(const IndecLabel& l) const {
    if (l.kind == IndecLabel::Kind::Regular && (l.lambda < 0 || l.lambda > (int)F.q))
        throw std::invalid_argument("certify_indec: lambda outside Omega");
    if (l.k < 1 || l.n < 0) throw std::invalid_argument("certify_indec: bad label");
    KRep<FqField> X = rep(l);
    if (!end_is_local(X)) throw std::logic_error("certify_indec: endomorphism ring not local");
    return l;
}

// --------------------------------------------------------- decomposition ---

namespace {

int hom_dim_formula(const FqField& F, const IndecLabel& a, const IndecLabel& b) {
    using K = IndecLabel::Kind;
    (void)F;
    if (a.kind == K::Preproj && b.kind == K::Preproj)
        return a.n <= b.n ? b.n - a.n + 1 : 0;
    if (a.kind == K::Preproj && b.kind == K::Regular) return b.k;
    if (a.kind == K::Preproj && b.kind == K::Preinj) return a.n + b.n;
    if (a.kind == K::Regular && b.kind == K::Regular)
        return a.lambda == b.lambda ? std::min(a.k, b.k) : 0;
    if (a.kind == K::Regular && b.kind == K::Preinj) return a.k;
    if (a.kind == K::Preinj && b.kind == K::Preinj)
        return a.n >= b.n ? a.n - b.n + 1 : 0;
    return 0;
}

} // namespace

std::vector<IndecLabel> KCat::decompose(const KRep<FqField>& X) const {
    if (X.d1 == 0 && X.d2 == 0) return {};
    std::vector<IndecLabel> cands;
    for (int n = 0; n + 1 <= X.d1 && n <= X.d2; ++n)
        cands.push_back({IndecLabel::Kind::Preproj, n, 0, 1});
    for (int lam = 0; lam <= (int)F.q; ++lam)
        for (int k = 1; k <= std::min(X.d1, X.d2); ++k)
            cands.push_back({IndecLabel::Kind::Regular, 0, lam, k});
    for (int n = 0; n <= X.d1 && n + 1 <= X.d2; ++n)
        cands.push_back({IndecLabel::Kind::Preinj, n, 0, 1});
    size_t m = cands.size();
    // solve H mult = h modulo a large prime, then certify over the integers
    FqField big(1000000007);
    FMat<FqField> H = fmat_zero(big, (int)m, (int)m);
    std::vector<int64_t> h((int)m);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j)
            H.at((int)i, (int)j) = hom_dim_formula(F, cands[i], cands[j]);
        h[i] = hom_dim(rep(cands[i]), X);
    }
    auto sol = fmat_solve(big, H, h);
    if (!sol) throw std::logic_error("decompose: hom-counting system inconsistent");
    std::vector<IndecLabel> out;
    int dim1 = 0, dim2 = 0;
    for (size_t j = 0; j < m; ++j) {
        int64_t mult = (*sol)[j];
        if (mult > 1000)
            throw std::logic_error("decompose: non-integral multiplicity (summand outside "
                                   "the rational candidates?)");
        auto [d1, d2] = label_dims(cands[j]);
        dim1 += (int)mult * d1;
        dim2 += (int)mult * d2;
        for (int64_t t = 0; t < mult; ++t) out.push_back(cands[j]);
    }
    if (dim1 != X.d1 || dim2 != X.d2)
        throw std::logic_error("decompose: dimension check failed (summand outside the "
                               "rational candidates?)");
    // exact integral verification of the counting system
    for (size_t i = 0; i < m; ++i) {
        int64_t acc = 0;
        for (size_t j = 0; j < m; ++j) acc += hom_dim_formula(F, cands[i], cands[j]) * (*sol)[j];
        if (acc != h[i]) throw std::logic_error("decompose: certification failed");
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ----------------------------------------------------------- sequences -----

KCat::Ses KCat::make_ses(const KRep<FqField>& A, const KRep<FqField>& B,
                         const KRep<FqField>& C, const KMor<FqField>& i,
                         const KMor<FqField>& d) const {
    auto check_mor = [&](const KRep<FqField>& X, const KRep<FqField>& Y, const KMor<FqField>& f) {
        if (!fmat_equal(F, fmat_mul(F, f.f1, X.alpha), fmat_mul(F, Y.alpha, f.f2)) ||
            !fmat_equal(F, fmat_mul(F, f.f1, X.beta), fmat_mul(F, Y.beta, f.f2)))
            throw std::invalid_argument("make_ses: not an intertwiner");
    };
    check_mor(A, B, i);
    check_mor(B, C, d);
    if (fmat_rank(F, i.f1) != A.d1 || fmat_rank(F, i.f2) != A.d2)
        throw std::invalid_argument("make_ses: not injective");
    if (fmat_rank(F, d.f1) != C.d1 || fmat_rank(F, d.f2) != C.d2)
        throw std::invalid_argument("make_ses: not surjective");
    FqMat c1 = fmat_mul(F, d.f1, i.f1), c2 = fmat_mul(F, d.f2, i.f2);
    for (auto x : c1.a)
        if (x % F.q) throw std::invalid_argument("make_ses: d i != 0");
    for (auto x : c2.a)
        if (x % F.q) throw std::invalid_argument("make_ses: d i != 0");
    if (A.d1 + C.d1 != B.d1 || A.d2 + C.d2 != B.d2)
        throw std::invalid_argument("make_ses: homology nonzero");
    return Ses{A, B, C, i, d};
}

KCat::Ses KCat::realize(const KRep<FqField>& C, const KRep<FqField>& A,
                        const std::vector<int64_t>& coords) const {
    auto P = kext_pres(F, C, A);
    std::vector<int64_t> v(P.cocycle_len, 0);
    for (size_t t = 0; t < P.coord_pos.size(); ++t) v[P.coord_pos[t]] = coords[t];
    auto [za, zb] = kunflatten(F, C, A, v);
    KRep<FqField> B;
    B.d1 = A.d1 + C.d1;
    B.d2 = A.d2 + C.d2;
    B.alpha = fmat_zero(F, B.d1, B.d2);
    B.beta = fmat_zero(F, B.d1, B.d2);
    for (int i = 0; i < A.d1; ++i)
        for (int j = 0; j < A.d2; ++j) {
            B.alpha.at(i, j) = A.alpha.at(i, j);
            B.beta.at(i, j) = A.beta.at(i, j);
        }
    for (int i = 0; i < A.d1; ++i)
        for (int j = 0; j < C.d2; ++j) {
            B.alpha.at(i, A.d2 + j) = za.at(i, j);
            B.beta.at(i, A.d2 + j) = zb.at(i, j);
        }
    for (int i = 0; i < C.d1; ++i)
        for (int j = 0; j < C.d2; ++j) {
            B.alpha.at(A.d1 + i, A.d2 + j) = C.alpha.at(i, j);
            B.beta.at(A.d1 + i, A.d2 + j) = C.beta.at(i, j);
        }
    KMor<FqField> i{fmat_zero(F, B.d1, A.d1), fmat_zero(F, B.d2, A.d2)};
    for (int t = 0; t < A.d1; ++t) i.f1.at(t, t) = 1;
    for (int t = 0; t < A.d2; ++t) i.f2.at(t, t) = 1;
    KMor<FqField> d{fmat_zero(F, C.d1, B.d1), fmat_zero(F, C.d2, B.d2)};
    for (int t = 0; t < C.d1; ++t) d.f1.at(t, A.d1 + t) = 1;
    for (int t = 0; t < C.d2; ++t) d.f2.at(t, A.d2 + t) = 1;
    return make_ses(A, B, C, i, d);
}

std::vector<int64_t> KCat::extract(const Ses& s) const {
    // sections of d, then the twisted corner pulled back through i
    auto section = [&](const FqMat& dm, int cdim) {
        FqMat S = fmat_zero(F, dm.cols, cdim);
        for (int c = 0; c < cdim; ++c) {
            std::vector<int64_t> e(dm.rows, 0);
            e[c] = 1;
            auto sol = fmat_solve(F, dm, e);
            if (!sol) throw std::logic_error("extract: deflation not surjective");
            for (int r = 0; r < dm.cols; ++r) S.at(r, c) = (*sol)[r];
        }
        return S;
    };
    FqMat s1 = section(s.d.f1, s.C.d1);
    FqMat s2 = section(s.d.f2, s.C.d2);
    FqMat ta = fmat_sub(F, fmat_mul(F, s.B.alpha, s2), fmat_mul(F, s1, s.C.alpha));
    FqMat tb = fmat_sub(F, fmat_mul(F, s.B.beta, s2), fmat_mul(F, s1, s.C.beta));
    auto pull = [&](const FqMat& t) {
        FqMat z = fmat_zero(F, s.A.d1, s.C.d2);
        for (int c = 0; c < t.cols; ++c) {
            std::vector<int64_t> col(t.rows);
            for (int r = 0; r < t.rows; ++r) col[r] = t.at(r, c);
            auto sol = fmat_solve(F, s.i.f1, col);
            if (!sol) throw std::logic_error("extract: cocycle not in the image");
            for (int r = 0; r < z.rows; ++r) z.at(r, c) = (*sol)[r];
        }
        return z;
    };
    FqMat za = pull(ta), zb = pull(tb);
    auto P = kext_pres(F, s.C, s.A);
    return kreduce(F, P, kflatten(F, s.C, s.A, za, zb));
}

KMor<FqField> KCat::tube_incl(int lambda, int k) const {
    (void)lambda;
    KMor<FqField> f{fmat_zero(F, k + 1, k), fmat_zero(F, k + 1, k)};
    for (int i = 0; i < k; ++i) {
        f.f1.at(i + 1, i) = 1;
        f.f2.at(i + 1, i) = 1;
    }
    return f;
}

KMor<FqField> KCat::tube_quot(int lambda, int k) const {
    (void)lambda;
    KMor<FqField> f{fmat_zero(F, k, k + 1), fmat_zero(F, k, k + 1)};
    for (int i = 0; i < k; ++i) {
        f.f1.at(i, i) = 1;
        f.f2.at(i, i) = 1;
    }
    return f;
}

KMor<FqField> KCat::compose(const KMor<FqField>& g, const KMor<FqField>& f) const {
    return KMor<FqField>{fmat_mul(F, g.f1, f.f1), fmat_mul(F, g.f2, f.f2)};
}

KRep<FuncField> KCat::generic_rep() const {
    FuncField k = func_field();
    KRep<FuncField> G;
    G.d1 = G.d2 = 1;
    G.alpha = fmat_zero(k, 1, 1);
    G.beta = fmat_zero(k, 1, 1);
    G.alpha.at(0, 0) = k.one();
    G.beta.at(0, 0) = k.T();
    return G;
}

KRep<FuncField> KCat::lift(const KRep<FqField>& X) const {
    FuncField k = func_field();
    KRep<FuncField> Y;
    Y.d1 = X.d1;
    Y.d2 = X.d2;
    Y.alpha = fmat_zero(k, X.d1, X.d2);
    Y.beta = fmat_zero(k, X.d1, X.d2);
    for (int i = 0; i < X.d1; ++i)
        for (int j = 0; j < X.d2; ++j) {
            Y.alpha.at(i, j) = k.from_int(X.alpha.at(i, j));
            Y.beta.at(i, j) = k.from_int(X.beta.at(i, j));
        }
    return Y;
}

// ------------------------------------------ symbolic point evaluations -----

namespace {

// embedding S[k] -> S[top] (composition of inclusions): e_i -> e_{i + top - k}
FqMat tube_embed(const FqField& F, int k, int top) {
    FqMat E = fmat_zero(F, top, k);
    for (int i = 0; i < k; ++i) E.at(i + top - k, i) = 1;
    return E;
}

// truncation S[k+j] -> S[k]: keep the first k coordinates
FqMat tube_trunc(const FqField& F, int kk, int from) {
    FqMat T = fmat_zero(F, kk, from);
    for (int i = 0; i < kk; ++i) T.at(i, i) = 1;
    return T;
}

} // namespace

std::variant<bool, StabilizationFailure>
KCat::hom_exactness_at_point(const Ses& s, const KZieglerPoint& pt, int window) const {
    // raw cocycle of s
    auto coords = extract(s);
    auto P = kext_pres(F, s.C, s.A);
    std::vector<int64_t> v(P.cocycle_len, 0);
    for (size_t t = 0; t < P.coord_pos.size(); ++t) v[P.coord_pos[t]] = coords[t];
    auto [za, zb] = kunflatten(F, s.C, s.A, v);

    if (pt.kind == KZieglerPoint::Kind::FiniteDim) {
        KRep<FqField> U = rep(pt.fin);
        auto PU = kext_pres(F, s.C, U);
        for (const auto& f : khom_basis(F, s.A, U)) {
            auto red = kreduce(F, PU, kflatten(F, s.C, U, fmat_mul(F, f.f1, za),
                                               fmat_mul(F, f.f1, zb)));
            for (auto x : red)
                if (x % F.q) return false;
        }
        return true;
    }
    if (pt.kind == KZieglerPoint::Kind::Generic) {
        FuncField k = func_field();
        KRep<FuncField> G = generic_rep();
        KRep<FuncField> CF = lift(s.C), AF = lift(s.A);
        FFMat zaf = fmat_zero(k, s.A.d1, s.C.d2), zbf = fmat_zero(k, s.A.d1, s.C.d2);
        for (int i = 0; i < s.A.d1; ++i)
            for (int j = 0; j < s.C.d2; ++j) {
                zaf.at(i, j) = k.from_int(za.at(i, j));
                zbf.at(i, j) = k.from_int(zb.at(i, j));
            }
        auto PG = kext_pres(k, CF, G);
        for (const auto& f : khom_basis(k, AF, G)) {
            auto red = kreduce(k, PG, kflatten(k, CF, G, fmat_mul(k, f.f1, zaf),
                                               fmat_mul(k, f.f1, zbf)));
            for (const auto& x : red)
                if (!k.is_zero(x)) return false;
        }
        return true;
    }
    int W = s.B.d1 + s.B.d2 + window;
    if (pt.kind == KZieglerPoint::Kind::Pruefer) {
        // classes pushed from level kk die (when they die) within a headroom
        // governed by the tube length of the quotient term
        auto verdict = [&](int scan, int H) {
            for (int kk = 1; kk <= scan; ++kk) {
                int top = kk + H;
                KRep<FqField> Sk = tube_rep(pt.lambda, kk);
                KRep<FqField> St = tube_rep(pt.lambda, top);
                FqMat emb = tube_embed(F, kk, top);
                auto PT = kext_pres(F, s.C, St);
                for (const auto& f : khom_basis(F, s.A, Sk)) {
                    FqMat pa = fmat_mul(F, emb, fmat_mul(F, f.f1, za));
                    FqMat pb = fmat_mul(F, emb, fmat_mul(F, f.f1, zb));
                    auto red = kreduce(F, PT, kflatten(F, s.C, St, pa, pb));
                    for (auto x : red)
                        if (x % F.q) return false;
                }
            }
            return true;
        };
        int H = s.C.d1 + window;
        bool a = verdict(W, H), b = verdict(W - 1, H - 1);
        if (a == b) return a;
        return StabilizationFailure{"Pruefer evaluation did not stabilize at window " +
                                    std::to_string(window)};
    }
    // adic: compatible families = stable images of the truncation towers;
    // the tower depth scales with the dimension of the subobject term
    int depth = s.A.d1 + s.A.d2 + window;
    auto verdict = [&](int wnd) -> std::optional<bool> {
        for (int kk = 1; kk <= W; ++kk) {
            KRep<FqField> Sk = tube_rep(pt.lambda, kk);
            // stable span of Hom(A, S[kk]) under truncations from above
            auto span_at = [&](int j) {
                std::vector<std::vector<int64_t>> rows;
                KRep<FqField> Sj = tube_rep(pt.lambda, kk + j);
                FqMat tr = tube_trunc(F, kk, kk + j);
                for (const auto& g : khom_basis(F, s.A, Sj)) {
                    FqMat m1 = fmat_mul(F, tr, g.f1);
                    FqMat m2 = fmat_mul(F, tr, g.f2);
                    std::vector<int64_t> row;
                    for (auto x : m1.a) row.push_back(x);
                    for (auto x : m2.a) row.push_back(x);
                    rows.push_back(std::move(row));
                }
                return rows;
            };
            auto rank_of = [&](const std::vector<std::vector<int64_t>>& rows) {
                if (rows.empty()) return 0;
                FqMat M = fmat_zero(F, (int)rows.size(), (int)rows[0].size());
                for (size_t r = 0; r < rows.size(); ++r)
                    for (size_t c = 0; c < rows[r].size(); ++c) M.at((int)r, (int)c) = rows[r][c];
                return fmat_rank(F, M);
            };
            auto deep = span_at(wnd);
            if (rank_of(deep) != rank_of(span_at(wnd - 1))) return std::nullopt; // not stable
            // test exactness against the stable family representatives
            KRep<FqField> St = tube_rep(pt.lambda, kk);
            auto PT = kext_pres(F, s.C, St);
            KRep<FqField> Sj = tube_rep(pt.lambda, kk + wnd);
            FqMat tr = tube_trunc(F, kk, kk + wnd);
            for (const auto& g : khom_basis(F, s.A, Sj)) {
                FqMat f1 = fmat_mul(F, tr, g.f1);
                auto red = kreduce(F, PT, kflatten(F, s.C, St, fmat_mul(F, f1, za),
                                                   fmat_mul(F, f1, zb)));
                for (auto x : red)
                    if (x % F.q) return false;
            }
        }
        return true;
    };
    auto a = verdict(depth), b = verdict(depth - 1);
    if (a && b && *a == *b) return *a;
    return StabilizationFailure{"adic evaluation did not stabilize at window " +
                                std::to_string(window)};
}

std::variant<bool, StabilizationFailure>
KCat::hom_vanishes(const KRep<FqField>& X, const KZieglerPoint& pt, int window) const {
    if (pt.kind == KZieglerPoint::Kind::FiniteDim) return hom_dim(X, rep(pt.fin)) == 0;
    if (pt.kind == KZieglerPoint::Kind::Generic) {
        FuncField k = func_field();
        return khom_basis(k, lift(X), generic_rep()).empty();
    }
    int W = X.d1 + X.d2 + window;
    if (pt.kind == KZieglerPoint::Kind::Pruefer) {
        // colim of injections: zero iff every level vanishes
        for (int kk = 1; kk <= W; ++kk)
            if (hom_dim(X, tube_rep(pt.lambda, kk)) != 0) return false;
        return true;
    }
    // adic: the limit vanishes iff all stable images vanish; depth scales
    // with the dimension of X
    int depth = X.d1 + X.d2 + window;
    auto verdict = [&](int wnd) -> std::optional<bool> {
        for (int kk = 1; kk <= W; ++kk) {
            auto rank_at = [&](int j) {
                KRep<FqField> Sj = tube_rep(pt.lambda, kk + j);
                FqMat tr = tube_trunc(F, kk, kk + j);
                auto basis = khom_basis(F, X, Sj);
                if (basis.empty()) return 0;
                FqMat M = fmat_zero(F, (int)basis.size(),
                                    kk * X.d1 + kk * X.d2);
                for (size_t r = 0; r < basis.size(); ++r) {
                    FqMat m1 = fmat_mul(F, tr, basis[r].f1);
                    FqMat m2 = fmat_mul(F, tr, basis[r].f2);
                    int c = 0;
                    for (auto x : m1.a) M.at((int)r, c++) = x;
                    for (auto x : m2.a) M.at((int)r, c++) = x;
                }
                return fmat_rank(F, M);
            };
            int deep = rank_at(wnd);
            if (deep != rank_at(wnd - 1)) return std::nullopt;
            if (deep != 0) return false;
        }
        return true;
    };
    auto a = verdict(depth), b = verdict(depth - 1);
    if (a && b && *a == *b) return *a;
    return StabilizationFailure{"adic Hom tower did not stabilize"};
}

std::variant<bool, StabilizationFailure>
KCat::ext_vanishes(const KRep<FqField>& X, const KZieglerPoint& pt, int window) const {
    if (pt.kind == KZieglerPoint::Kind::FiniteDim) return ext_dim(X, rep(pt.fin)) == 0;
    if (pt.kind == KZieglerPoint::Kind::Generic) {
        FuncField k = func_field();
        return kext_pres(k, lift(X), generic_rep()).dim == 0;
    }
    int W = X.d1 + X.d2 + window;
    if (pt.kind == KZieglerPoint::Kind::Pruefer) {
        // colim: zero iff every level-kk class dies within the headroom H
        // above it (the dying horizon grows with the tube length of X)
        auto verdict = [&](int scan, int H) {
            for (int kk = 1; kk <= scan; ++kk) {
                int top = kk + H;
                KRep<FqField> Sk = tube_rep(pt.lambda, kk);
                KRep<FqField> St = tube_rep(pt.lambda, top);
                auto Pk = kext_pres(F, X, Sk);
                auto Pt = kext_pres(F, X, St);
                FqMat emb = tube_embed(F, kk, top);
                for (int t = 0; t < Pk.dim; ++t) {
                    std::vector<int64_t> coords(Pk.dim, 0);
                    coords[t] = 1;
                    std::vector<int64_t> v(Pk.cocycle_len, 0);
                    for (size_t w = 0; w < Pk.coord_pos.size(); ++w)
                        v[Pk.coord_pos[w]] = coords[w];
                    auto [za, zb] = kunflatten(F, X, Sk, v);
                    auto red = kreduce(F, Pt, kflatten(F, X, St, fmat_mul(F, emb, za),
                                                       fmat_mul(F, emb, zb)));
                    for (auto x : red)
                        if (x % F.q) return false;
                }
            }
            return true;
        };
        int H = X.d1 + window;
        bool a = verdict(W, H), b = verdict(W - 1, H - 1);
        if (a == b) return a;
        return StabilizationFailure{"Pruefer Ext tower did not stabilize"};
    }
    // adic: lim zero iff stable images of the Ext towers vanish; the tower
    // depth scales with the dimension of X
    int depth = X.d1 + window;
    auto verdict = [&](int wnd) -> std::optional<bool> {
        for (int kk = 1; kk <= W; ++kk) {
            KRep<FqField> Sk = tube_rep(pt.lambda, kk);
            auto Pk = kext_pres(F, X, Sk);
            if (Pk.dim == 0) continue;
            auto image_rank = [&](int j) {
                KRep<FqField> Sj = tube_rep(pt.lambda, kk + j);
                auto Pj = kext_pres(F, X, Sj);
                FqMat tr = tube_trunc(F, kk, kk + j);
                std::vector<std::vector<int64_t>> rows;
                for (int t = 0; t < Pj.dim; ++t) {
                    std::vector<int64_t> coords(Pj.dim, 0);
                    coords[t] = 1;
                    std::vector<int64_t> v(Pj.cocycle_len, 0);
                    for (size_t w = 0; w < Pj.coord_pos.size(); ++w)
                        v[Pj.coord_pos[w]] = coords[w];
                    auto [za, zb] = kunflatten(F, X, Sj, v);
                    rows.push_back(kreduce(F, Pk, kflatten(F, X, Sk, fmat_mul(F, tr, za),
                                                           fmat_mul(F, tr, zb))));
                }
                if (rows.empty()) return 0;
                FqMat M = fmat_zero(F, (int)rows.size(), Pk.dim);
                for (size_t r = 0; r < rows.size(); ++r)
                    for (int c = 0; c < Pk.dim; ++c) M.at((int)r, c) = rows[r][c];
                return fmat_rank(F, M);
            };
            int deep = image_rank(wnd);
            if (deep != image_rank(wnd - 1)) return std::nullopt;
            if (deep != 0) return false;
        }
        return true;
    };
    auto a = verdict(depth), b = verdict(depth - 1);
    if (a && b && *a == *b) return *a;
    return StabilizationFailure{"adic Ext tower did not stabilize"};
}

std::variant<KCat::Subspace, StabilizationFailure>
KCat::membership_subspace(const KRep<FqField>& C, const KRep<FqField>& A,
                          const std::vector<KZieglerPoint>& points, int window) const {
    auto P = kext_pres(F, C, A);
    Subspace out;
    out.ambient_dim = P.dim;
    if (P.dim == 0) {
        out.dim = 0;
        return out;
    }
    // constraint rows over F_q: evaluated on the coordinate basis of Ext
    std::vector<std::vector<int64_t>> rows;
    auto basis_cocycle = [&](int t) {
        std::vector<int64_t> coords(P.dim, 0);
        coords[t] = 1;
        std::vector<int64_t> v(P.cocycle_len, 0);
        for (size_t w = 0; w < P.coord_pos.size(); ++w) v[P.coord_pos[w]] = coords[w];
        return kunflatten(F, C, A, v);
    };
    int W = A.d1 + A.d2 + C.d1 + C.d2 + window;
    for (const auto& pt : points) {
        if (pt.kind == KZieglerPoint::Kind::FiniteDim) {
            KRep<FqField> U = rep(pt.fin);
            auto PU = kext_pres(F, C, U);
            for (const auto& f : khom_basis(F, A, U)) {
                std::vector<std::vector<int64_t>> cols;
                for (int t = 0; t < P.dim; ++t) {
                    auto [za, zb] = basis_cocycle(t);
                    cols.push_back(kreduce(F, PU, kflatten(F, C, U, fmat_mul(F, f.f1, za),
                                                           fmat_mul(F, f.f1, zb))));
                }
                for (size_t coord = 0; coord < cols[0].size(); ++coord) {
                    std::vector<int64_t> row(P.dim);
                    for (int t = 0; t < P.dim; ++t) row[t] = cols[t][coord];
                    rows.push_back(std::move(row));
                }
            }
        } else if (pt.kind == KZieglerPoint::Kind::Generic) {
            FuncField k = func_field();
            KRep<FuncField> G = generic_rep();
            KRep<FuncField> CF = lift(C), AF = lift(A);
            auto PG = kext_pres(k, CF, G);
            for (const auto& f : khom_basis(k, AF, G)) {
                // c[i][t] in F_q(T); clear denominators per row i
                std::vector<std::vector<FuncField::Elem>> c;
                for (int t = 0; t < P.dim; ++t) {
                    auto [za, zb] = basis_cocycle(t);
                    FFMat zaf = fmat_zero(k, A.d1, C.d2), zbf = fmat_zero(k, A.d1, C.d2);
                    for (int i = 0; i < A.d1; ++i)
                        for (int j = 0; j < C.d2; ++j) {
                            zaf.at(i, j) = k.from_int(za.at(i, j));
                            zbf.at(i, j) = k.from_int(zb.at(i, j));
                        }
                    c.push_back(kreduce(k, PG, kflatten(k, CF, G, fmat_mul(k, f.f1, zaf),
                                                        fmat_mul(k, f.f1, zbf))));
                }
                size_t ncoord = c.empty() ? 0 : c[0].size();
                for (size_t coord = 0; coord < ncoord; ++coord) {
                    // common denominator across t
                    FqPoly den = poly_from(F, {1});
                    for (int t = 0; t < P.dim; ++t)
                        den = poly_mul(F, den, c[t][coord].den);
                    int maxdeg = -1;
                    std::vector<FqPoly> nums(P.dim);
                    for (int t = 0; t < P.dim; ++t) {
                        FqPoly other = poly_divmod(F, den, c[t][coord].den).first;
                        nums[t] = poly_mul(F, c[t][coord].num, other);
                        maxdeg = std::max(maxdeg, nums[t].deg());
                    }
                    for (int dgr = 0; dgr <= maxdeg; ++dgr) {
                        std::vector<int64_t> row(P.dim, 0);
                        for (int t = 0; t < P.dim; ++t)
                            row[t] = dgr <= nums[t].deg() ? nums[t].c[dgr] : 0;
                        rows.push_back(std::move(row));
                    }
                }
            }
        } else if (pt.kind == KZieglerPoint::Kind::Pruefer) {
            auto add_rows = [&](int scan, int H, std::vector<std::vector<int64_t>>& target) {
                for (int kk = 1; kk <= scan; ++kk) {
                    int top = kk + H;
                    KRep<FqField> Sk = tube_rep(pt.lambda, kk);
                    KRep<FqField> St = tube_rep(pt.lambda, top);
                    auto Pt = kext_pres(F, C, St);
                    FqMat emb = tube_embed(F, kk, top);
                    for (const auto& f : khom_basis(F, A, Sk)) {
                        std::vector<std::vector<int64_t>> cols;
                        for (int t = 0; t < P.dim; ++t) {
                            auto [za, zb] = basis_cocycle(t);
                            FqMat pa = fmat_mul(F, emb, fmat_mul(F, f.f1, za));
                            FqMat pb = fmat_mul(F, emb, fmat_mul(F, f.f1, zb));
                            cols.push_back(kreduce(F, Pt, kflatten(F, C, St, pa, pb)));
                        }
                        for (size_t coord = 0; coord < cols[0].size(); ++coord) {
                            std::vector<int64_t> row(P.dim);
                            for (int t = 0; t < P.dim; ++t) row[t] = cols[t][coord];
                            target.push_back(std::move(row));
                        }
                    }
                }
            };
            std::vector<std::vector<int64_t>> r1, r2;
            int H = C.d1 + window;
            add_rows(W, H, r1);
            add_rows(W - 1, H - 1, r2);
            // kernels must agree between windows
            auto ker_dim = [&](std::vector<std::vector<int64_t>>& rr) {
                if (rr.empty()) return P.dim;
                FqMat M = fmat_zero(F, (int)rr.size(), P.dim);
                for (size_t r = 0; r < rr.size(); ++r)
                    for (int t = 0; t < P.dim; ++t) M.at((int)r, t) = rr[r][t];
                return P.dim - fmat_rank(F, M);
            };
            if (ker_dim(r1) != ker_dim(r2))
                return StabilizationFailure{"Pruefer membership did not stabilize"};
            for (auto& r : r1) rows.push_back(std::move(r));
        } else { // adic
            int depth = A.d1 + A.d2 + window;
            auto add_rows = [&](int wnd, std::vector<std::vector<int64_t>>& target) -> bool {
                for (int kk = 1; kk <= W; ++kk) {
                    KRep<FqField> Sk = tube_rep(pt.lambda, kk);
                    auto PU = kext_pres(F, C, Sk);
                    KRep<FqField> Sj = tube_rep(pt.lambda, kk + wnd);
                    FqMat tr = tube_trunc(F, kk, kk + wnd);
                    // stable-image representatives: truncations of homs from above
                    for (const auto& g : khom_basis(F, A, Sj)) {
                        FqMat f1 = fmat_mul(F, tr, g.f1);
                        std::vector<std::vector<int64_t>> cols;
                        for (int t = 0; t < P.dim; ++t) {
                            auto [za, zb] = basis_cocycle(t);
                            cols.push_back(kreduce(F, PU, kflatten(F, C, Sk, fmat_mul(F, f1, za),
                                                                   fmat_mul(F, f1, zb))));
                        }
                        for (size_t coord = 0; coord < cols[0].size(); ++coord) {
                            std::vector<int64_t> row(P.dim);
                            for (int t = 0; t < P.dim; ++t) row[t] = cols[t][coord];
                            target.push_back(std::move(row));
                        }
                    }
                }
                return true;
            };
            std::vector<std::vector<int64_t>> r1, r2;
            add_rows(depth, r1);
            add_rows(depth - 1, r2);
            auto ker_dim = [&](std::vector<std::vector<int64_t>>& rr) {
                if (rr.empty()) return P.dim;
                FqMat M = fmat_zero(F, (int)rr.size(), P.dim);
                for (size_t r = 0; r < rr.size(); ++r)
                    for (int t = 0; t < P.dim; ++t) M.at((int)r, t) = rr[r][t];
                return P.dim - fmat_rank(F, M);
            };
            if (ker_dim(r1) != ker_dim(r2))
                return StabilizationFailure{"adic membership did not stabilize"};
            for (auto& r : r1) rows.push_back(std::move(r));
        }
    }
    if (rows.empty()) {
        out.dim = P.dim;
        for (int t = 0; t < P.dim; ++t) {
            std::vector<int64_t> e(P.dim, 0);
            e[t] = 1;
            out.basis.push_back(e);
        }
        return out;
    }
    FqMat M = fmat_zero(F, (int)rows.size(), P.dim);
    for (size_t r = 0; r < rows.size(); ++r)
        for (int t = 0; t < P.dim; ++t) M.at((int)r, t) = rows[r][t];
    FqMat N = fmat_nullspace(F, M);
    out.dim = N.cols;
    for (int c = 0; c < N.cols; ++c) {
        std::vector<int64_t> b(P.dim);
        for (int t = 0; t < P.dim; ++t) b[t] = N.at(t, c);
        out.basis.push_back(std::move(b));
    }
    return out;
}

// ------------------------------------------------------- Ziegler rules -----

std::vector<RuleViolation> ziegler_closed_violations(const KCat& cat, const KClosedSetDescr& u) {
    std::vector<RuleViolation> out;
    bool any_infinite = u.pp_infinite || u.pi_infinite || !u.tubes_infinite.empty();
    int omega = cat.omega();
    if (any_infinite) {
        if (!u.generic) out.push_back({"(b)", "infinite U^fin requires the generic point"});
        if (u.pp_infinite && (int)u.M.size() != omega)
            out.push_back({"(c1)", "infinitely many preprojectives require all adics"});
        if (u.pi_infinite && (int)u.T.size() != omega)
            out.push_back({"(c2)", "infinitely many preinjectives require all Pruefer points"});
        for (int lam : u.tubes_infinite)
            if (!u.T.count(lam) || !u.M.count(lam))
                out.push_back({"(c3)", "infinite tube " + std::to_string(lam) +
                                           " requires its Pruefer and adic points"});
    } else {
        bool tm_empty = u.T.empty() && u.M.empty();
        if (!tm_empty && !u.generic)
            out.push_back({"(a)", "nonempty T or M requires the generic point"});
    }
    return out;
}

bool is_ziegler_closed(const KCat& cat, const KClosedSetDescr& u) {
    return ziegler_closed_violations(cat, u).empty();
}

KClosedSetDescr ziegler_closure(const KCat& cat, KClosedSetDescr u) {
    int omega = cat.omega();
    bool any_infinite = u.pp_infinite || u.pi_infinite || !u.tubes_infinite.empty();
    if (any_infinite) {
        u.generic = true;
        if (u.pp_infinite)
            for (int l = 0; l < omega; ++l) u.M.insert(l);
        if (u.pi_infinite)
            for (int l = 0; l < omega; ++l) u.T.insert(l);
        for (int lam : u.tubes_infinite) {
            u.T.insert(lam);
            u.M.insert(lam);
        }
    } else if (!u.T.empty() || !u.M.empty()) {
        u.generic = true;
    }
    return u;
}

// --------------------------------------------------------- type (I) --------

std::vector<KZieglerPoint> typeI_points(const KCat& cat, const TypeISpec& spec) {
    std::vector<KZieglerPoint> pts;
    pts.push_back({KZieglerPoint::Kind::Generic, {}, 0});
    auto all = [&](KZieglerPoint::Kind k) {
        for (int l = 0; l < cat.omega(); ++l) pts.push_back({k, {}, l});
    };
    switch (spec.kind) {
    case TypeISpec::Kind::Generic: break;
    case TypeISpec::Kind::Adic: pts.push_back({KZieglerPoint::Kind::Adic, {}, spec.lambda}); break;
    case TypeISpec::Kind::Pruefer:
        pts.push_back({KZieglerPoint::Kind::Pruefer, {}, spec.lambda});
        break;
    case TypeISpec::Kind::AllAdic: all(KZieglerPoint::Kind::Adic); break;
    case TypeISpec::Kind::AllPruefer: all(KZieglerPoint::Kind::Pruefer); break;
    case TypeISpec::Kind::AllBoth:
        all(KZieglerPoint::Kind::Adic);
        all(KZieglerPoint::Kind::Pruefer);
        break;
    }
    return pts;
}

TypeITable typeI_ext_table(const KCat& cat, const TypeISpec& spec, int pp_max, int tube_max,
                           int window) {
    TypeITable out;
    auto points = typeI_points(cat, spec);
    struct Rep {
        int cls;    // 0 = P, 1 = R, 2 = Q
        int lambda; // for R
        IndecLabel label;
    };
    std::vector<Rep> reps;
    for (int n = 0; n <= pp_max; ++n)
        reps.push_back({0, -1, {IndecLabel::Kind::Preproj, n, 0, 1}});
    for (int lam = 0; lam < cat.omega(); ++lam)
        for (int k = 1; k <= tube_max; ++k)
            reps.push_back({1, lam, {IndecLabel::Kind::Regular, 0, lam, k}});
    for (int n = 0; n <= pp_max; ++n)
        reps.push_back({2, -1, {IndecLabel::Kind::Preinj, n, 0, 1}});
    std::map<std::tuple<int, int, int, int>, std::pair<bool, bool>> agg; // (all_full, all_zero)
    for (const auto& x : reps)
        for (const auto& y : reps) {
            KRep<FqField> C = cat.rep(x.label), A = cat.rep(y.label);
            int e = cat.ext_dim(C, A);
            if (e == 0) continue;
            auto sub = cat.membership_subspace(C, A, points, window);
            if (std::holds_alternative<StabilizationFailure>(sub)) {
                out.stabilization_failures++;
                continue;
            }
            int s = std::get<KCat::Subspace>(sub).dim;
            auto key = std::make_tuple(x.cls, x.lambda, y.cls, y.lambda);
            auto it = agg.find(key);
            if (it == agg.end()) agg[key] = {s == e, s == 0};
            else {
                it->second.first = it->second.first && (s == e);
                it->second.second = it->second.second && (s == 0);
            }
        }
    for (auto& [key, v] : agg) {
        TypeICell::Value val = v.first    ? TypeICell::Value::Full
                               : v.second ? TypeICell::Value::Zero
                                          : TypeICell::Value::Mixed;
        out.cells[key] = val;
    }
    return out;
}

TypeITable typeI_expected_table(const KCat& cat, const TypeISpec& spec) {
    TypeITable out;
    int omega = cat.omega();
    // ambient-nonzero cells: (P,P), (R_l,R_l), (Q,Q), (R_l,P), (Q,R_l), (Q,P)
    auto set = [&](int xc, int xl, int yc, int yl, TypeICell::Value v) {
        out.cells[{xc, xl, yc, yl}] = v;
    };
    using V = TypeICell::Value;
    set(0, -1, 0, -1, V::Full);
    set(2, -1, 2, -1, V::Full);
    set(2, -1, 0, -1, V::Zero); // Ext^1_U(Q, P) = 0 in every type (I) structure
    for (int l = 0; l < omega; ++l) {
        set(1, l, 1, l, V::Full);
        set(1, l, 0, -1, V::Full);
        set(2, -1, 1, l, V::Full);
    }
    switch (spec.kind) {
    case TypeISpec::Kind::Generic: break;
    case TypeISpec::Kind::Adic: set(1, spec.lambda, 0, -1, V::Zero); break;
    case TypeISpec::Kind::Pruefer: set(2, -1, 1, spec.lambda, V::Zero); break;
    case TypeISpec::Kind::AllAdic:
        for (int l = 0; l < omega; ++l) set(1, l, 0, -1, V::Zero);
        break;
    case TypeISpec::Kind::AllPruefer:
        for (int l = 0; l < omega; ++l) set(2, -1, 1, l, V::Zero);
        break;
    case TypeISpec::Kind::AllBoth:
        for (int l = 0; l < omega; ++l) {
            set(1, l, 0, -1, V::Zero);
            set(2, -1, 1, l, V::Zero);
        }
        break;
    }
    return out;
}

std::variant<Gldim2Witness, StabilizationFailure>
gldim2_witness(const KCat& cat, const TypeISpec& spec, int window) {
    if (spec.kind != TypeISpec::Kind::Generic && spec.kind != TypeISpec::Kind::Adic &&
        spec.kind != TypeISpec::Kind::Pruefer)
        throw std::invalid_argument("gldim2_witness: union structures are hereditary");
    Gldim2Witness w;
    w.mu = (spec.kind == TypeISpec::Kind::Generic) ? 0 : (spec.lambda + 1) % cat.omega();
    KRep<FqField> S = cat.rep({IndecLabel::Kind::Regular, 0, w.mu, 1});
    KRep<FqField> P0 = cat.rep({IndecLabel::Kind::Preproj, 0, 0, 1});
    KRep<FqField> Q0 = cat.rep({IndecLabel::Kind::Preinj, 0, 0, 1});
    // Ext^1(S, P0) and Ext^1(Q0, S) are one-dimensional: any nonzero class
    w.half1 = cat.realize(S, P0, {1});
    w.half2 = cat.realize(Q0, S, {1});
    auto points = typeI_points(cat, spec);
    // both halves lie in E^U
    auto check_member = [&](const KCat::Ses& s) -> std::optional<bool> {
        for (const auto& pt : points) {
            auto r = cat.hom_exactness_at_point(s, pt, window);
            if (std::holds_alternative<StabilizationFailure>(r)) return std::nullopt;
            if (!std::get<bool>(r)) return false;
        }
        return true;
    };
    auto m1 = check_member(w.half1), m2 = check_member(w.half2);
    if (!m1 || !m2) return StabilizationFailure{"witness membership did not stabilize"};
    w.halves_in_structure = *m1 && *m2;
    // splice nonzero: [half1] not in the image of Ext^1_E(Q1, P0) -> Ext^1(S, P0)
    // (pullback along the inflation S >-> Q1 from half2)
    KRep<FqField> Q1 = w.half2.B;
    auto sub = cat.membership_subspace(Q1, P0, points, window);
    if (std::holds_alternative<StabilizationFailure>(sub))
        return std::get<StabilizationFailure>(sub);
    auto PQ = kext_pres(cat.F, Q1, P0);
    auto PS = kext_pres(cat.F, S, P0);
    std::vector<std::vector<int64_t>> image_rows;
    for (const auto& b : std::get<KCat::Subspace>(sub).basis) {
        std::vector<int64_t> v(PQ.cocycle_len, 0);
        for (size_t t = 0; t < PQ.coord_pos.size(); ++t) v[PQ.coord_pos[t]] = b[t];
        auto [za, zb] = kunflatten(cat.F, Q1, P0, v);
        // pull back along i : S -> Q1 (precompose with i.f2)
        FqMat pa = fmat_mul(cat.F, za, w.half2.i.f2);
        FqMat pb = fmat_mul(cat.F, zb, w.half2.i.f2);
        image_rows.push_back(kreduce(cat.F, PS, kflatten(cat.F, S, P0, pa, pb)));
    }
    std::vector<int64_t> target = cat.extract(w.half1);
    if (image_rows.empty()) {
        bool nz = false;
        for (auto x : target)
            if (x % cat.F.q) nz = true;
        w.splice_nonzero = nz;
        return w;
    }
    FqMat M = fmat_zero(cat.F, (int)image_rows.size() + 1, PS.dim);
    for (size_t r = 0; r < image_rows.size(); ++r)
        for (int c = 0; c < PS.dim; ++c) M.at((int)r, c) = image_rows[r][c];
    int base = fmat_rank(cat.F, M);
    for (int c = 0; c < PS.dim; ++c) M.at((int)image_rows.size(), c) = target[c];
    w.splice_nonzero = fmat_rank(cat.F, M) != base;
    return w;
}

// --------------------------------------------------------- type (II) -------

bool typeII_member(const KCat& cat, const std::vector<IndecLabel>& H, const KCat::Ses& s) {
    for (const auto& hl : H) {
        KRep<FqField> Hr = cat.rep(hl);
        int want = cat.hom_dim(s.A, Hr);
        if (want == 0) continue;
        auto basis = khom_basis(cat.F, s.B, Hr);
        // rank of restriction along i
        int len = Hr.d1 * s.A.d1 + Hr.d2 * s.A.d2;
        FqMat M = fmat_zero(cat.F, std::max((int)basis.size(), 1), std::max(len, 1));
        for (size_t r = 0; r < basis.size(); ++r) {
            FqMat m1 = fmat_mul(cat.F, basis[r].f1, s.i.f1);
            FqMat m2 = fmat_mul(cat.F, basis[r].f2, s.i.f2);
            int c = 0;
            for (auto x : m1.a) M.at((int)r, c++) = x;
            for (auto x : m2.a) M.at((int)r, c++) = x;
        }
        if (fmat_rank(cat.F, M) != want) return false;
    }
    return true;
}

namespace {

struct KStack {
    std::vector<std::pair<IndecLabel, KMor<FqField>>> parts; // maps X -> H
};

KMor<FqField> assemble_stack(const KCat& cat, const KRep<FqField>& X,
                             const std::vector<std::pair<IndecLabel, KMor<FqField>>>& parts,
                             KRep<FqField>& target) {
    target = cat.zero_rep();
    target.alpha = fmat_zero(cat.F, 0, 0);
    target.beta = fmat_zero(cat.F, 0, 0);
    std::vector<std::pair<int, int>> offs;
    for (const auto& [l, f] : parts) {
        (void)f;
        offs.push_back({target.d1, target.d2});
        target = cat.sum(target, cat.rep(l));
    }
    KMor<FqField> F{fmat_zero(cat.F, target.d1, X.d1), fmat_zero(cat.F, target.d2, X.d2)};
    for (size_t t = 0; t < parts.size(); ++t) {
        const auto& f = parts[t].second;
        for (int i = 0; i < f.f1.rows; ++i)
            for (int j = 0; j < f.f1.cols; ++j) F.f1.at(offs[t].first + i, j) = f.f1.at(i, j);
        for (int i = 0; i < f.f2.rows; ++i)
            for (int j = 0; j < f.f2.cols; ++j) F.f2.at(offs[t].second + i, j) = f.f2.at(i, j);
    }
    return F;
}

bool kmono(const KCat& cat, const KRep<FqField>& X, const KMor<FqField>& f) {
    return fmat_rank(cat.F, f.f1) == X.d1 && fmat_rank(cat.F, f.f2) == X.d2;
}

// does every g : X -> H factor through f : X -> I?
bool kapproximates(const KCat& cat, const std::vector<IndecLabel>& H, const KRep<FqField>& X,
                   const KRep<FqField>& I, const KMor<FqField>& f) {
    for (const auto& hl : H) {
        KRep<FqField> Hr = cat.rep(hl);
        auto gb = khom_basis(cat.F, X, Hr);
        if (gb.empty()) continue;
        auto hb = khom_basis(cat.F, I, Hr);
        int len = Hr.d1 * X.d1 + Hr.d2 * X.d2;
        FqMat M = fmat_zero(cat.F, std::max(len, 1), std::max((int)hb.size(), 1));
        for (size_t t = 0; t < hb.size(); ++t) {
            FqMat m1 = fmat_mul(cat.F, hb[t].f1, f.f1);
            FqMat m2 = fmat_mul(cat.F, hb[t].f2, f.f2);
            int r = 0;
            for (auto x : m1.a) M.at(r++, (int)t) = x;
            for (auto x : m2.a) M.at(r++, (int)t) = x;
        }
        for (const auto& g : gb) {
            std::vector<int64_t> rhs;
            for (auto x : g.f1.a) rhs.push_back(x);
            for (auto x : g.f2.a) rhs.push_back(x);
            if (!fmat_solve(cat.F, M, rhs)) return false;
        }
    }
    return true;
}

// cokernel of a mono f : X -> I with the projection, raw
std::pair<KRep<FqField>, KMor<FqField>> kcokernel(const KCat& cat, const KRep<FqField>& I,
                                                  const KMor<FqField>& f) {
    auto quotient_of = [&](const FqMat& fm, int idim) {
        // rows of the projection: eliminate along im(fm)
        FqMat T = fmat_zero(cat.F, fm.cols, fm.rows);
        for (int i = 0; i < fm.rows; ++i)
            for (int j = 0; j < fm.cols; ++j) T.at(j, i) = fm.at(i, j);
        auto piv = fmat_rref(cat.F, T);
        std::vector<char> is_piv(idim, 0);
        for (int c : piv) is_piv[c] = 1;
        std::vector<int> nonpiv;
        for (int c = 0; c < idim; ++c)
            if (!is_piv[c]) nonpiv.push_back(c);
        FqMat P = fmat_zero(cat.F, (int)nonpiv.size(), idim);
        for (size_t r = 0; r < nonpiv.size(); ++r) {
            P.at((int)r, nonpiv[r]) = 1;
            for (size_t t = 0; t < piv.size(); ++t)
                P.at((int)r, piv[t]) = cat.F.neg(T.at((int)t, nonpiv[r]));
        }
        return std::make_pair(P, nonpiv);
    };
    auto [P1, np1] = quotient_of(f.f1, I.d1);
    auto [P2, np2] = quotient_of(f.f2, I.d2);
    KRep<FqField> Q;
    Q.d1 = P1.rows;
    Q.d2 = P2.rows;
    FqMat S2 = fmat_zero(cat.F, I.d2, Q.d2);
    for (int r = 0; r < Q.d2; ++r) S2.at(np2[r], r) = 1;
    Q.alpha = fmat_mul(cat.F, P1, fmat_mul(cat.F, I.alpha, S2));
    Q.beta = fmat_mul(cat.F, P1, fmat_mul(cat.F, I.beta, S2));
    return {Q, KMor<FqField>{P1, P2}};
}

} // namespace

TypeIICoresolution typeII_idim(const KCat& cat, const std::vector<IndecLabel>& H,
                               const IndecLabel& X, int bound) {
    TypeIICoresolution out;
    auto in_addH = [&](const std::vector<IndecLabel>& labels) {
        for (const auto& l : labels)
            if (std::find(H.begin(), H.end(), l) == H.end()) return false;
        return true;
    };
    KRep<FqField> cur = cat.rep(X);
    std::vector<IndecLabel> cur_labels{X};
    std::vector<std::vector<IndecLabel>> seen{cur_labels};
    int step = 0;
    while (true) {
        if ((cur.d1 == 0 && cur.d2 == 0) || in_addH(cur_labels)) {
            out.status = TypeIICoresolution::Status::Terminated;
            out.idim = step;
            return out;
        }
        if (step >= bound) {
            out.status = TypeIICoresolution::Status::ExceededBound;
            out.idim = step;
            return out;
        }
        // stacked map into add(H), minimized greedily
        std::vector<std::pair<IndecLabel, KMor<FqField>>> parts;
        for (const auto& hl : H)
            for (const auto& g : khom_basis(cat.F, cur, cat.rep(hl))) parts.push_back({hl, g});
        KRep<FqField> I;
        KMor<FqField> f = assemble_stack(cat, cur, parts, I);
        if (!kmono(cat, cur, f))
            throw std::runtime_error("typeII_idim: no monomorphism into add(H) from " +
                                     label_name(X));
        bool changed = true;
        while (changed && parts.size() > 1) {
            changed = false;
            for (size_t i = parts.size(); i-- > 0;) {
                std::vector<std::pair<IndecLabel, KMor<FqField>>> trial;
                for (size_t j = 0; j < parts.size(); ++j)
                    if (j != i) trial.push_back(parts[j]);
                KRep<FqField> Itr;
                KMor<FqField> ftr = assemble_stack(cat, cur, trial, Itr);
                if (kmono(cat, cur, ftr) && kapproximates(cat, H, cur, Itr, ftr)) {
                    parts = trial;
                    I = Itr;
                    f = ftr;
                    changed = true;
                    break;
                }
            }
        }
        std::vector<IndecLabel> iterms;
        for (const auto& [l, g] : parts) {
            (void)g;
            iterms.push_back(l);
        }
        std::sort(iterms.begin(), iterms.end());
        out.injective_terms.push_back(iterms);
        auto [Q, proj] = kcokernel(cat, I, f);
        // the step is a sequence in F^H by the approximation property
        KCat::Ses step_ses = cat.make_ses(cur, I, Q, f, proj);
        if (!typeII_member(cat, H, step_ses))
            throw std::logic_error("typeII_idim: approximation step left the structure");
        cur = Q;
        cur_labels = cat.decompose(cur);
        ++step;
        for (size_t i = 0; i < seen.size(); ++i)
            if (seen[i] == cur_labels) {
                out.status = TypeIICoresolution::Status::Periodic;
                out.period = (int)(seen.size() - i);
                out.idim = step;
                return out;
            }
        seen.push_back(cur_labels);
    }
}

} // namespace exlat::kron
