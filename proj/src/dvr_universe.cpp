#include "exlat/dvr_universe.hpp"

#include <algorithm>

namespace exlat::dvr {

bool DvrBackend::within_bounds(const Obj& o) const {
    if (o.free_rank > rank_bound) return false;
    if ((int)o.exps.size() > parts_bound) return false;
    for (int e : o.exps)
        if (e > exp_bound) return false;
    return true;
}

std::vector<DvrBackend::Obj> DvrBackend::summands(const Obj& o) const {
    std::vector<Obj> out;
    for (int e : o.exps) out.push_back(mod_cyclic(e));
    for (int r = 0; r < o.free_rank; ++r) out.push_back(mod_free(1));
    return out;
}

std::vector<int64_t> DvrBackend::coord_radix(const Obj& C, const Obj& A) const {
    std::vector<int64_t> radix;
    for (const ExtBlock& b : ext_blocks(R, C, A)) radix.push_back(R.pow_p(b.ord_exp));
    return radix;
}

std::optional<DvrBackend::SesT> DvrBackend::realize(const Obj& C, const Obj& A,
                                                    const Coords& z) const {
    Ses s = realize_ext(R, C, A, z);
    if (!within_bounds(s.B())) return std::nullopt;
    return s;
}

GroupShape DvrBackend::subgroup_shape(const Obj& C, const Obj& A,
                                      const std::vector<Coords>& members) const {
    auto bl = ext_blocks(R, C, A);
    GroupShape out;
    if (members.empty() || bl.empty()) return out;
    // brute subgroup closure, then invariant factors from the p-power layer sizes
    std::map<Coords, char> seen;
    Coords zero(bl.size(), 0);
    seen[zero] = 1;
    std::vector<Coords> stack{zero};
    while (!stack.empty()) {
        Coords cur = stack.back();
        stack.pop_back();
        for (const auto& g : members) {
            Coords nx = ext_coords_add(R, C, A, cur, g);
            if (!seen.count(nx)) {
                seen[nx] = 1;
                stack.push_back(nx);
            }
        }
    }
    std::vector<size_t> layer_sizes;
    std::map<Coords, char> cur_set = seen;
    while (cur_set.size() > 1) {
        layer_sizes.push_back(cur_set.size());
        std::map<Coords, char> next;
        for (auto& [c, v] : cur_set) {
            (void)v;
            next[ext_coords_scale(R, C, A, R.p, c)] = 1;
        }
        cur_set = std::move(next);
    }
    // counts[j] = number of invariant factors of exponent > j
    std::vector<int> counts;
    for (size_t j = 0; j < layer_sizes.size(); ++j) {
        size_t nextsz = (j + 1 < layer_sizes.size()) ? layer_sizes[j + 1] : 1;
        size_t ratio = layer_sizes[j] / nextsz;
        int c = 0;
        while (ratio > 1) { ratio /= (size_t)R.p; ++c; }
        counts.push_back(c);
    }
    for (size_t j = 0; j < counts.size(); ++j) {
        int next = (j + 1 < counts.size()) ? counts[j + 1] : 0;
        for (int t = 0; t < counts[j] - next; ++t) out.torsion_exps.push_back((int)j + 1);
    }
    std::sort(out.torsion_exps.rbegin(), out.torsion_exps.rend());
    return out;
}

std::vector<DvrBackend::Mor> DvrBackend::aut_gens(const Obj& o) const {
    std::vector<Mor> out;
    if (o.n() == 0) return out;
    std::vector<int64_t> unit_gens;
    if (R.p == 2) {
        unit_gens = {R.reduce(-1), R.reduce(5)};
    } else {
        // a primitive root mod p^2 stays primitive for all higher powers
        int64_t p2 = R.p * R.p;
        int64_t phi = p2 - R.p;
        for (int64_t g = 2; g < p2; ++g) {
            if (g % R.p == 0) continue;
            int64_t x = 1 % p2, ord = 0;
            do {
                x = (x * g) % p2;
                ++ord;
            } while (x != 1 % p2);
            if (ord == phi) { unit_gens = {g}; break; }
        }
    }
    for (int i = 0; i < o.n(); ++i)
        for (int64_t u : unit_gens) {
            Mor f = mor_identity(o);
            f.m.at(i, i) = R.reduce(u);
            out.push_back(f);
        }
    for (int i = 0; i < o.n(); ++i)
        for (int j = 0; j < o.n(); ++j) {
            if (i == j) continue;
            int as = ann_exp(R, o, j), ad = ann_exp(R, o, i);
            if (as < R.k && ad >= R.k) continue; // torsion -> free is zero
            Mor f = mor_identity(o);
            int need = std::max(0, std::min(ad - as, R.k));
            int64_t e = R.pow_p(need);
            if (R.is_zero(e)) continue;
            f.m.at(i, j) = e;
            out.push_back(f);
        }
    return out;
}

std::vector<DvrBackend::Mor> DvrBackend::hom_gens(const Obj& A, const Obj& B) const {
    std::vector<Mor> out;
    for (const HomBlock& b : hom_blocks(R, A, B))
        out.push_back(hom_block_generator(R, A, B, b));
    return out;
}

std::optional<DvrBackend::SesT> DvrBackend::push_out(const SesT& s, const Mor& f) const {
    Ses t = pushout(R, s, f);
    if (!within_bounds(t.B())) return std::nullopt;
    return t;
}

std::optional<DvrBackend::SesT> DvrBackend::pull_back(const SesT& s, const Mor& g) const {
    Ses t = pullback(R, s, g);
    if (!within_bounds(t.B())) return std::nullopt;
    return t;
}

std::optional<DvrBackend::SesT> DvrBackend::comp_defl(const SesT& s1, const SesT& s2) const {
    Ses t = compose_deflations(R, s1, s2);
    if (!within_bounds(t.A())) return std::nullopt;
    return t;
}

std::optional<DvrBackend::SesT> DvrBackend::comp_infl(const SesT& s1, const SesT& s2) const {
    Mor comp = mor_compose(R, s2.i, s1.i);
    try {
        Ses t = cokernel_ses(R, comp);
        if (!within_bounds(t.C())) return std::nullopt;
        return t;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::optional<DvrBackend::SesT> DvrBackend::mono_coker(const Mor& f) const {
    try {
        Ses t = cokernel_ses(R, f);
        if (!within_bounds(t.C()) || !within_bounds(t.B())) return std::nullopt;
        return t;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

bool DvrBackend::factors(const Mor& f, const Mor& g) const {
    const Mod& X = f.src;
    const Mod& I = f.dst;
    const Mod& J = g.dst;
    if (X.n() == 0) return true;
    int nvars = J.n() * I.n();
    int neqs = J.n() * X.n();
    if (neqs == 0) return true;
    PMat M(neqs, std::max(nvars, 1));
    std::vector<int64_t> b(neqs);
    std::vector<int> ann(neqs);
    for (int j = 0; j < J.n(); ++j)
        for (int x = 0; x < X.n(); ++x) {
            int row = j * X.n() + x;
            ann[row] = ann_exp(R, J, j);
            b[row] = R.reduce(g.m.at(j, x));
            for (int i = 0; i < I.n(); ++i) {
                int col = j * I.n() + i;
                int need = std::max(0, std::min(ann_exp(R, J, j) - ann_exp(R, I, i), R.k));
                M.at(row, col) = R.mul(R.pow_p(need), f.m.at(i, x));
            }
        }
    return pm_solve(R, M, b, ann).has_value();
}

DvrBackend::Mor DvrBackend::stack2(const Mor& f, const Mor& g) const {
    assert(f.src == g.src);
    Mor i1 = incl_first(R, f.dst, g.dst);
    Mor i2 = incl_second(R, f.dst, g.dst);
    return mor_add(R, mor_compose(R, i1, f), mor_compose(R, i2, g));
}

std::vector<DvrBackend::Mor> DvrBackend::enumerate_homs(const Obj& X, const Obj& I,
                                                        size_t cap) const {
    auto blocks = hom_blocks(R, X, I);
    std::vector<int64_t> radix;
    for (auto& b : blocks) radix.push_back(R.pow_p(std::min(b.ord_exp, exp_bound)));
    __int128 total = 1;
    for (int64_t r : radix) {
        total *= r;
        if (total > (__int128)cap) return {};
    }
    std::vector<Mor> out;
    if (radix.empty()) {
        out.push_back(mor_zero(X, I));
        return out;
    }
    std::vector<int64_t> v(radix.size(), 0);
    while (true) {
        Mor f = mor_zero(X, I);
        for (size_t t = 0; t < blocks.size(); ++t)
            f.m.at(blocks[t].dst_idx, blocks[t].src_idx) =
                R.mul(v[t], R.pow_p(blocks[t].min_val));
        out.push_back(f);
        size_t i = 0;
        while (i < v.size() && ++v[i] == radix[i]) v[i++] = 0;
        if (i == v.size()) break;
    }
    return out;
}

std::string DvrBackend::mor_desc(const Mor& f) const {
    std::string s = mod_name(f.src) + "->" + mod_name(f.dst) + "[";
    for (int i = 0; i < f.m.rows; ++i) {
        if (i) s += ";";
        for (int j = 0; j < f.m.cols; ++j) {
            if (j) s += ",";
            s += std::to_string(R.reduce(f.m.at(i, j)));
        }
    }
    return s + "]";
}

bool DvrBackend::relative_ext_right_exact(const std::function<bool(const SesT&)>& member,
                                          const SesT& s, const Obj& X, RelExtCtx& ctx) const {
    const Mod& B = s.B();
    const Mod& C = s.C();
    if (X.torsion_count() == 0) return true; // Ext^1(free, -) = 0
    auto member_sub = [&](const Mod& T) -> const std::vector<std::pair<ExtCoords, char>>& {
        auto key = std::make_pair(X, T);
        auto it = ctx.sub.find(key);
        if (it != ctx.sub.end()) return it->second;
        std::vector<std::pair<ExtCoords, char>> entries;
        auto bl = ext_blocks(R, X, T);
        std::vector<int64_t> radix;
        for (auto& b : bl) radix.push_back(R.pow_p(b.ord_exp));
        if (radix.empty()) {
            entries.push_back({{}, 1});
        } else {
            std::vector<int64_t> v(radix.size(), 0);
            while (true) {
                Ses t = realize_ext(R, X, T, v);
                entries.push_back({v, member(t) ? char(1) : char(0)});
                size_t i = 0;
                while (i < v.size() && ++v[i] == radix[i]) v[i++] = 0;
                if (i == v.size()) break;
            }
        }
        return ctx.sub.emplace(key, std::move(entries)).first->second;
    };
    // generators of Ext^1_E(X, B), blockwise over the summands of B
    std::vector<ExtCoords> img_gens;
    auto bsummands = summands(B);
    for (size_t si = 0; si < bsummands.size(); ++si) {
        Mor inc = mor_zero(bsummands[si], B);
        inc.m.at((int)si, 0) = 1;
        Mor dinc = mor_compose(R, s.d, inc); // summand -> C
        for (const auto& [z, memb] : member_sub(bsummands[si])) {
            if (!memb) continue;
            img_gens.push_back(ext_coords_pushforward(R, X, bsummands[si], dinc, z));
        }
    }
    std::map<ExtCoords, char> seen;
    ExtCoords zero = ext_zero(R, X, C);
    seen[zero] = 1;
    std::vector<ExtCoords> stack{zero};
    while (!stack.empty()) {
        ExtCoords cur = stack.back();
        stack.pop_back();
        for (const auto& g : img_gens) {
            ExtCoords nx = ext_coords_add(R, X, C, cur, g);
            if (!seen.count(nx)) {
                seen[nx] = 1;
                stack.push_back(nx);
            }
        }
    }
    // member classes of Ext^1_E(X, C): blockwise product over C's summands
    auto csummands = summands(C);
    std::vector<ExtCoords> targets{zero};
    for (size_t si = 0; si < csummands.size(); ++si) {
        Mor inc = mor_zero(csummands[si], C);
        inc.m.at((int)si, 0) = 1;
        std::vector<ExtCoords> mem;
        for (const auto& [z, memb] : member_sub(csummands[si]))
            if (memb) mem.push_back(ext_coords_pushforward(R, X, csummands[si], inc, z));
        std::vector<ExtCoords> next;
        for (const auto& t : targets)
            for (const auto& m : mem) next.push_back(ext_coords_add(R, X, C, t, m));
        targets = std::move(next);
    }
    for (const auto& t : targets)
        if (!seen.count(t)) return false;
    return true;
}

core::Structure<DvrBackend> DvrBackend::structure_from_descriptor(const Descriptor& d) const {
    core::Structure<DvrBackend> S;
    std::string nm = "E^{";
    bool first = true;
    for (int n : d.finite) {
        if (!first) nm += ",";
        nm += std::to_string(n);
        first = false;
    }
    if (d.adic) nm += (first ? "adic" : ",adic");
    nm += "}";
    S.name = nm;
    S.has_descriptor = true;
    S.descriptor = d;
    PCtx Rc = R;
    std::set<int> L = d.finite;
    bool adic = d.adic;
    S.member = [Rc, L, adic](const Ses& s) {
        if (!is_exact_EL(Rc, s, L)) return false;
        if (adic && !is_exact_Eprime(Rc, s)) return false;
        return true;
    };
    return S;
}

DvrBackend::Descriptor DvrBackend::descriptor_union(const Descriptor& a, const Descriptor& b) {
    Descriptor u;
    u.finite = a.finite;
    u.finite.insert(b.finite.begin(), b.finite.end());
    u.adic = a.adic || b.adic;
    return u;
}

DvrBackend::Descriptor DvrBackend::descriptor_intersect(const Descriptor& a,
                                                        const Descriptor& b) {
    Descriptor u;
    for (int n : a.finite)
        if (b.finite.count(n)) u.finite.insert(n);
    u.adic = a.adic && b.adic;
    return u;
}

DvrBackend make_dvr_backend(int64_t p, int N) {
    // the pool runs one exponent deeper than the classified space; at the
    // boundary max(L) = N the structures E_L and E'_L only differ on
    // sequences R >-> R/P^a + R ->> R/P^m with m = N + 1
    int D = N + 1;
    DvrBackend bk;
    bk.R = PCtx(p, std::min(p == 2 ? 52 : 32, 4 * D + 12));
    bk.N = N;
    bk.exp_bound = 2 * D;
    bk.parts_bound = 3;
    bk.rank_bound = 2;
    bk.end_objects.push_back(Mod{});
    bk.end_objects.push_back(mod_free(1));
    for (int e = 1; e <= D; ++e) bk.end_objects.push_back(mod_cyclic(e));
    for (int e = 1; e <= D; ++e) bk.end_objects.push_back(make_mod({e}, 1));
    for (int e = 1; e <= D; ++e) bk.test_objects.push_back(mod_cyclic(e));
    bk.test_objects.push_back(mod_free(1));
    bk.injective_candidates = bk.test_objects;
    bk.a_end_objects = bk.end_objects;
    return bk;
}

DvrBackend make_zmod_backend(int64_t p, int expmax, int rankmax) {
    DvrBackend bk;
    bk.R = PCtx(p, std::min(p == 2 ? 52 : 32, 4 * expmax + 12));
    bk.N = expmax;
    bk.exp_bound = 2 * expmax;
    bk.parts_bound = 4;
    bk.rank_bound = 2 * rankmax;
    // C-side ends: zero, indecomposables, two-part torsion, mixed R + torsion
    // (these cover the middles of indecomposable-ended classes, which the
    // Ext^2 splice scans pull back along); A-side ends: indecomposables only
    // (Ext is additive there, so the blockwise machinery covers sums)
    bk.end_objects.push_back(Mod{});
    if (rankmax > 0) bk.end_objects.push_back(mod_free(1));
    for (int a = 1; a <= expmax; ++a) bk.end_objects.push_back(mod_cyclic(a));
    for (int a = 1; a <= expmax; ++a)
        for (int b = 1; b <= a; ++b) bk.end_objects.push_back(make_mod({a, b}, 0));
    if (rankmax > 0)
        for (int a = 1; a <= expmax; ++a) bk.end_objects.push_back(make_mod({a}, 1));
    bk.a_end_objects.push_back(Mod{});
    if (rankmax > 0) bk.a_end_objects.push_back(mod_free(1));
    for (int a = 1; a <= expmax; ++a) bk.a_end_objects.push_back(mod_cyclic(a));
    for (int e = 1; e <= expmax; ++e) bk.test_objects.push_back(mod_cyclic(e));
    if (rankmax > 0) bk.test_objects.push_back(mod_free(1));
    bk.injective_candidates = bk.test_objects;
    return bk;
}

DvrUniverse build_dvr_universe(int64_t p, int N) {
    return core::build_universe(make_dvr_backend(p, N));
}

DvrStructure closed_set_structure(const DvrUniverse& U, const ClosedSet& u) {
    return U.bk.structure_from_descriptor(u);
}

DvrStructure split_structure(const DvrUniverse& U) {
    DvrStructure S;
    S.name = "split";
    PCtx R = U.bk.R;
    S.member = [R](const Ses& s) { return is_split_ses(R, s); };
    return S;
}

ClosedSet points_of(const DvrUniverse& U, const DvrStructure& S) {
    ClosedSet out;
    auto injs = core::injectives(U, S);
    for (const auto& I : injs)
        if (I.free_rank == 0 && I.exps.size() == 1 && I.exps[0] <= U.bk.N)
            out.finite.insert(I.exps[0]);
    PCtx R = U.bk.R;
    DvrStructure Eprime;
    Eprime.name = "E'";
    Eprime.member = [R](const Ses& s) { return is_exact_Eprime(R, s); };
    out.adic = core::structure_leq(U, S, Eprime);
    return out;
}

ClosedSet closure_roundtrip(const DvrUniverse& U, const std::set<int>& finite,
                            bool adic, bool infinite_tail) {
    ClosedSet seed;
    seed.finite = finite;
    seed.adic = adic || infinite_tail;
    return points_of(U, closed_set_structure(U, seed));
}

DvrProfiles build_profiles(const DvrUniverse& U, int maxt) {
    DvrProfiles P;
    P.maxt = maxt;
    P.exact_mask.resize(U.families.size());
    P.eprime.resize(U.families.size());
    const PCtx& R = U.bk.R;
    for (size_t f = 0; f < U.families.size(); ++f) {
        const auto& F = U.families[f];
        P.exact_mask[f].assign(F.classes.size(), 0);
        P.eprime[f].assign(F.classes.size(), 0);
        for (size_t c = 0; c < F.classes.size(); ++c) {
            if (!F.seqs[c]) continue;
            uint32_t mask = 0;
            for (int t = 1; t <= maxt; ++t)
                if (hom_exact_at(R, *F.seqs[c], t)) mask |= (1u << (t - 1));
            P.exact_mask[f][c] = mask;
            P.eprime[f][c] = is_exact_Eprime(R, *F.seqs[c]) ? 1 : 0;
        }
    }
    return P;
}

core::Bitmap profile_bitmap(const DvrUniverse& U, const DvrProfiles& P, const ClosedSet& u) {
    uint32_t want = 0;
    for (int t : u.finite) {
        if (t < 1 || t > P.maxt) throw std::invalid_argument("profile_bitmap: t outside profile");
        want |= (1u << (t - 1));
    }
    core::Bitmap bm(U.families.size());
    for (size_t f = 0; f < U.families.size(); ++f) {
        const auto& F = U.families[f];
        bm[f].assign(F.classes.size(), 0);
        for (size_t c = 0; c < F.classes.size(); ++c) {
            if (!F.seqs[c]) continue;
            if ((P.exact_mask[f][c] & want) != want) continue;
            if (u.adic && !P.eprime[f][c]) continue;
            bm[f][c] = 1;
        }
    }
    return bm;
}

ClosedSet profile_points_of(const DvrUniverse& U, const DvrProfiles& P, const core::Bitmap& bm) {
    ClosedSet out;
    for (int n = 1; n <= U.bk.N; ++n) {
        Mod I = mod_cyclic(n);
        bool inj = true;
        for (const auto& C : U.bk.end_objects) {
            if (C.is_zero()) continue;
            auto it = U.family_of.find({C, I});
            if (it == U.family_of.end()) { inj = false; break; }
            const auto& F = U.families[it->second];
            if (F.oversize || !F.complete) { inj = false; break; }
            for (size_t c = 1; c < F.classes.size(); ++c)
                if (bm[it->second][c]) { inj = false; break; }
            if (!inj) break;
        }
        if (inj) out.finite.insert(n);
    }
    out.adic = true;
    for (size_t f = 0; f < U.families.size() && out.adic; ++f)
        for (size_t c = 0; c < bm[f].size(); ++c)
            if (bm[f][c] && !P.eprime[f][c]) { out.adic = false; break; }
    return out;
}

} // namespace exlat::dvr
