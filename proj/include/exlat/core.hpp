#pragma once

// Generic finite exact-category engine. A Universe is a finite family of
// objects together with the pool of all short exact sequences between the
// declared end objects, enumerated class by class (one Ext family per ordered
// end pair) and bucketed into isomorphism orbits under the automorphism
// actions. Exact structures are membership predicates with memoized bitmaps
// over the pool; axiom checking, meets/joins, relative Ext groups, injective
// coresolutions and global dimension run on top, parametrized by a category
// backend (DVR modules, A_n quiver representations).
//
// Backend contract (duck-typed):
//   types   Obj (regular, ordered), Mor, SesT (with A()/B()/C()), Coords,
//           Descriptor (closed-set side datum; set-like, ordered)
//   data    end_objects (C side), a_end_objects (A side), test_objects,
//           injective_candidates : vector<Obj>
//           family_cap : size_t
//   queries obj_name, obj_is_zero, within_bounds, summands
//   ext     coord_radix(C,A), realize(C,A,z) -> optional<SesT>, extract(ses),
//           coords_add(C,A,x,y), subgroup_shape(C,A,members)
//   orbits  aut_gens(O), act_push(C,A,u,z), act_pull(C,A,w,z)
//   moves   hom_gens(A,B), push_out(ses,f), pull_back(ses,g) -> optional<SesT>,
//           comp_defl(s1,s2), comp_infl(s1,s2) -> optional<SesT>,
//           sum_ses(s1,s2), make_split(A,C)
//   approx  mono_coker(f) -> optional<SesT>, factors(f,g), stack2(f,g),
//           enumerate_homs(X,I,cap), mor_desc(f)

#include "exlat/dvr.hpp" // GroupShape

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace exlat::core {

using dvr::GroupShape;

template <class B>
struct Family {
    using Obj = typename B::Obj;
    using SesT = typename B::SesT;
    using Coords = typename B::Coords;

    Obj C, A;
    std::vector<int64_t> radix;
    bool oversize = false; // class count above cap; family not enumerated
    bool complete = true;  // every class realizable within the object bounds
    std::vector<Coords> classes;              // index 0 = zero class
    std::vector<std::optional<SesT>> seqs;    // realization (nullopt: out of bounds)
    std::vector<int> orbit;                   // orbit id per class
    std::vector<int> orbit_reps;              // one class index per orbit
    std::map<Coords, int> index;
};

struct ClassId {
    int family = -1;
    int cls = -1;
    bool valid() const { return family >= 0; }
    auto operator<=>(const ClassId&) const = default;
};

template <class B>
struct Universe {
    B bk;
    std::vector<std::pair<typename B::Obj, typename B::Obj>> endpairs; // (C, A)
    std::vector<Family<B>> families;
    std::map<std::pair<typename B::Obj, typename B::Obj>, int> family_of;

    const Family<B>& fam(int i) const { return families[i]; }
};

namespace detail {

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(n) { for (int i = 0; i < n; ++i) up[i] = i; }
    int find(int x) { while (up[x] != x) x = up[x] = up[up[x]]; return x; }
    void unite(int a, int b) { up[find(a)] = find(b); }
};

inline void next_mixed_radix(std::vector<int64_t>& v, const std::vector<int64_t>& radix, bool& done) {
    size_t i = 0;
    while (i < v.size() && ++v[i] == radix[i]) v[i++] = 0;
    if (i == v.size()) done = true;
}

} // namespace detail

template <class B>
Family<B> build_family(const B& bk, const typename B::Obj& C, const typename B::Obj& A) {
    Family<B> F;
    F.C = C;
    F.A = A;
    F.radix = bk.coord_radix(C, A);
    __int128 total = 1;
    for (int64_t r : F.radix) {
        total *= r;
        if (total > (__int128)bk.family_cap) { F.oversize = true; return F; }
    }
    std::vector<int64_t> v(F.radix.size(), 0);
    bool done = F.radix.empty() ? false : false;
    if (F.radix.empty()) {
        F.classes.push_back({});
        F.seqs.push_back(bk.realize(C, A, {}));
        F.index[{}] = 0;
    } else {
        while (!done) {
            F.index[v] = (int)F.classes.size();
            F.classes.push_back(v);
            F.seqs.push_back(bk.realize(C, A, v));
            detail::next_mixed_radix(v, F.radix, done);
        }
    }
    for (auto& s : F.seqs)
        if (!s) F.complete = false;
    // isomorphism orbits under Aut(A) x Aut(C)
    detail::UnionFind uf((int)F.classes.size());
    for (const auto& u : bk.aut_gens(A))
        for (size_t i = 0; i < F.classes.size(); ++i) {
            auto z = bk.act_push(C, A, u, F.classes[i]);
            auto it = F.index.find(z);
            if (it != F.index.end()) uf.unite((int)i, it->second);
        }
    for (const auto& w : bk.aut_gens(C))
        for (size_t i = 0; i < F.classes.size(); ++i) {
            auto z = bk.act_pull(C, A, w, F.classes[i]);
            auto it = F.index.find(z);
            if (it != F.index.end()) uf.unite((int)i, it->second);
        }
    F.orbit.assign(F.classes.size(), -1);
    std::map<int, int> root_to_orbit;
    for (size_t i = 0; i < F.classes.size(); ++i) {
        int r = uf.find((int)i);
        auto it = root_to_orbit.find(r);
        if (it == root_to_orbit.end()) {
            root_to_orbit[r] = (int)F.orbit_reps.size();
            F.orbit[i] = (int)F.orbit_reps.size();
            F.orbit_reps.push_back((int)i);
        } else {
            F.orbit[i] = it->second;
        }
    }
    return F;
}

template <class B>
Universe<B> build_universe(B bk) {
    Universe<B> U;
    U.bk = std::move(bk);
    for (const auto& C : U.bk.end_objects)
        for (const auto& A : U.bk.a_end_objects) {
            U.family_of[{C, A}] = (int)U.families.size();
            U.endpairs.push_back({C, A});
            U.families.push_back(build_family(U.bk, C, A));
        }
    return U;
}

// locate an arbitrary certified sequence in the pool (canonical-form ends)
template <class B>
ClassId identify(const Universe<B>& U, const typename B::SesT& s) {
    auto it = U.family_of.find({s.C(), s.A()});
    if (it == U.family_of.end()) return {};
    const Family<B>& F = U.families[it->second];
    if (F.oversize) return {};
    auto z = U.bk.extract(s);
    auto jt = F.index.find(z);
    if (jt == F.index.end()) return {};
    return {it->second, jt->second};
}

// ----------------------------------------------------------- structures ----

template <class B>
struct Structure {
    std::string name;
    bool has_descriptor = false;
    typename B::Descriptor descriptor{};
    std::function<bool(const typename B::SesT&)> member;
};

using Bitmap = std::vector<std::vector<char>>;

template <class B>
Bitmap compute_bitmap(const Universe<B>& U, const Structure<B>& S) {
    Bitmap bm(U.families.size());
    for (size_t f = 0; f < U.families.size(); ++f) {
        const auto& F = U.families[f];
        bm[f].assign(F.classes.size(), 0);
        for (size_t c = 0; c < F.classes.size(); ++c)
            if (F.seqs[c] && S.member(*F.seqs[c])) bm[f][c] = 1;
    }
    return bm;
}

inline bool bitmap_leq(const Bitmap& a, const Bitmap& b) {
    for (size_t f = 0; f < a.size(); ++f)
        for (size_t c = 0; c < a[f].size(); ++c)
            if (a[f][c] && !b[f][c]) return false;
    return true;
}

inline bool bitmap_eq(const Bitmap& a, const Bitmap& b) {
    return bitmap_leq(a, b) && bitmap_leq(b, a);
}

template <class B>
Structure<B> meet(const Structure<B>& S, const Structure<B>& T) {
    Structure<B> M;
    M.name = "meet(" + S.name + "," + T.name + ")";
    auto sm = S.member, tm = T.member;
    M.member = [sm, tm](const typename B::SesT& s) { return sm(s) && tm(s); };
    if (S.has_descriptor && T.has_descriptor) {
        M.has_descriptor = true;
        M.descriptor = B::descriptor_union(S.descriptor, T.descriptor);
    }
    return M;
}

struct UnsupportedJoin {
    std::string reason;
};

// Join: through the closed-set side when both carry descriptors, otherwise as
// the meet of all enumerated structures containing both.
template <class B>
std::variant<Structure<B>, UnsupportedJoin>
join(const Universe<B>& U, const Structure<B>& S, const Structure<B>& T,
     const std::vector<Structure<B>>* enumerated_lattice = nullptr) {
    if (S.has_descriptor && T.has_descriptor) {
        auto d = B::descriptor_intersect(S.descriptor, T.descriptor);
        Structure<B> J = U.bk.structure_from_descriptor(d);
        J.name = "join(" + S.name + "," + T.name + ")";
        return J;
    }
    if (enumerated_lattice) {
        Bitmap bs = compute_bitmap(U, S), bt = compute_bitmap(U, T);
        std::optional<Structure<B>> best;
        Bitmap best_bm;
        for (const auto& E : *enumerated_lattice) {
            Bitmap be = compute_bitmap(U, E);
            if (bitmap_leq(bs, be) && bitmap_leq(bt, be)) {
                if (!best || bitmap_leq(be, best_bm)) {
                    best = E;
                    best_bm = be;
                }
            }
        }
        if (best) return *best;
        return UnsupportedJoin{"no upper bound in the enumerated lattice"};
    }
    return UnsupportedJoin{"no closed-set provenance and no enumerated lattice"};
}

// ------------------------------------------------------------ axiom check --

struct AxiomEntry {
    std::string axiom;
    long checked = 0, failures = 0, untestable = 0;
    std::string witness; // first failure
};

struct AxiomReport {
    std::vector<AxiomEntry> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (e.failures) return false;
        return true;
    }
};

// one pushout/pullback move: member class -> reached class (same family C or A changed)
struct ReachEdge {
    ClassId src, dst;
    std::string kind; // "pushout" | "pullback"
    std::string via;
    bool dst_outside = false; // reached class has no in-bounds realization
};

template <class B>
std::vector<ReachEdge> reach_edges(const Universe<B>& U, const Bitmap& bm) {
    std::vector<ReachEdge> edges;
    for (size_t f = 0; f < U.families.size(); ++f) {
        const auto& F = U.families[f];
        if (F.oversize) continue;
        for (int rep : F.orbit_reps) {
            if (!bm[f][rep] || !F.seqs[rep]) continue;
            const auto& s = *F.seqs[rep];
            // pushouts along generators of Hom(A, A2), closed under sums of moves
            for (const auto& A2 : U.bk.a_end_objects) {
                auto it = U.family_of.find({F.C, A2});
                if (it == U.family_of.end()) continue;
                const auto& G = U.families[it->second];
                if (G.oversize) continue;
                std::vector<int> gen_idx;
                bool all_ok = true;
                std::vector<std::string> vias;
                for (const auto& h : U.bk.hom_gens(F.A, A2)) {
                    auto po = U.bk.push_out(s, h);
                    if (!po) { all_ok = false; continue; }
                    auto z = U.bk.extract(*po);
                    auto jt = G.index.find(z);
                    if (jt == G.index.end()) { all_ok = false; continue; }
                    gen_idx.push_back(jt->second);
                    vias.push_back(U.bk.mor_desc(h));
                }
                (void)all_ok;
                // subgroup reachable from the generator images
                std::vector<char> seen(G.classes.size(), 0);
                std::vector<int> stack{0};
                seen[0] = 1;
                std::vector<std::string> how(G.classes.size());
                while (!stack.empty()) {
                    int cur = stack.back();
                    stack.pop_back();
                    for (size_t g = 0; g < gen_idx.size(); ++g) {
                        auto z = U.bk.coords_add(G.C, G.A, G.classes[cur], G.classes[gen_idx[g]]);
                        int nx = G.index.at(z);
                        if (!seen[nx]) {
                            seen[nx] = 1;
                            how[nx] = vias[g];
                            stack.push_back(nx);
                        }
                    }
                }
                for (size_t c = 0; c < G.classes.size(); ++c)
                    if (seen[c] && !(it->second == (int)f && (int)c == rep)) {
                        ReachEdge e;
                        e.src = {(int)f, rep};
                        e.dst = {it->second, (int)c};
                        e.kind = "pushout";
                        e.via = how[c];
                        e.dst_outside = !G.seqs[c].has_value();
                        edges.push_back(e);
                    }
            }
            // pullbacks along generators of Hom(C2, C)
            for (const auto& C2 : U.bk.end_objects) {
                auto it = U.family_of.find({C2, F.A});
                if (it == U.family_of.end()) continue;
                const auto& G = U.families[it->second];
                if (G.oversize) continue;
                std::vector<int> gen_idx;
                std::vector<std::string> vias;
                for (const auto& h : U.bk.hom_gens(C2, F.C)) {
                    auto pb = U.bk.pull_back(s, h);
                    if (!pb) continue;
                    auto z = U.bk.extract(*pb);
                    auto jt = G.index.find(z);
                    if (jt == G.index.end()) continue;
                    gen_idx.push_back(jt->second);
                    vias.push_back(U.bk.mor_desc(h));
                }
                std::vector<char> seen(G.classes.size(), 0);
                std::vector<int> stack{0};
                seen[0] = 1;
                std::vector<std::string> how(G.classes.size());
                while (!stack.empty()) {
                    int cur = stack.back();
                    stack.pop_back();
                    for (size_t g = 0; g < gen_idx.size(); ++g) {
                        auto z = U.bk.coords_add(G.C, G.A, G.classes[cur], G.classes[gen_idx[g]]);
                        int nx = G.index.at(z);
                        if (!seen[nx]) {
                            seen[nx] = 1;
                            how[nx] = vias[g];
                            stack.push_back(nx);
                        }
                    }
                }
                for (size_t c = 0; c < G.classes.size(); ++c)
                    if (seen[c] && !(it->second == (int)f && (int)c == rep)) {
                        ReachEdge e;
                        e.src = {(int)f, rep};
                        e.dst = {it->second, (int)c};
                        e.kind = "pullback";
                        e.via = how[c];
                        e.dst_outside = !G.seqs[c].has_value();
                        edges.push_back(e);
                    }
            }
        }
    }
    return edges;
}

template <class B>
std::string class_desc(const Universe<B>& U, ClassId id) {
    const auto& F = U.families[id.family];
    std::string mid = F.seqs[id.cls] ? U.bk.obj_name(F.seqs[id.cls]->B()) : std::string("?");
    return U.bk.obj_name(F.A) + " >-> " + mid + " ->> " + U.bk.obj_name(F.C);
}

template <class B>
AxiomReport check_exact_axioms(const Universe<B>& U, const Structure<B>& S) {
    Bitmap bm = compute_bitmap(U, S);
    AxiomReport rep;
    // (1) split sequences
    AxiomEntry splits{"contains all split sequences", 0, 0, 0, ""};
    for (size_t f = 0; f < U.families.size(); ++f) {
        if (U.families[f].oversize) { splits.untestable++; continue; }
        splits.checked++;
        if (!bm[f].empty() && !bm[f][0]) {
            splits.failures++;
            if (splits.witness.empty())
                splits.witness = "split class of " + class_desc(U, ClassId{(int)f, 0});
        }
    }
    rep.entries.push_back(splits);
    // (2) closed under isomorphism
    AxiomEntry iso{"closed under isomorphism", 0, 0, 0, ""};
    for (size_t f = 0; f < U.families.size(); ++f) {
        const auto& F = U.families[f];
        if (F.oversize) continue;
        for (int o = 0; o < (int)F.orbit_reps.size(); ++o) {
            iso.checked++;
            char val = bm[f][F.orbit_reps[o]];
            for (size_t c = 0; c < F.classes.size(); ++c)
                if (F.orbit[c] == o && bm[f][c] != val) {
                    iso.failures++;
                    if (iso.witness.empty())
                        iso.witness = "orbit of " + class_desc(U, ClassId{(int)f, F.orbit_reps[o]});
                    break;
                }
        }
    }
    rep.entries.push_back(iso);
    // (3) closed under direct sums (within the pool)
    AxiomEntry sums{"closed under direct sums", 0, 0, 0, ""};
    {
        std::vector<ClassId> members;
        for (size_t f = 0; f < U.families.size(); ++f) {
            const auto& F = U.families[f];
            if (F.oversize) continue;
            for (int r : F.orbit_reps)
                if (bm[f][r] && F.seqs[r]) members.push_back({(int)f, r});
        }
        for (const auto& a : members)
            for (const auto& b : members) {
                const auto& Fa = U.families[a.family];
                const auto& Fb = U.families[b.family];
                auto sumC = U.bk.obj_sum(Fa.C, Fb.C);
                auto sumA = U.bk.obj_sum(Fa.A, Fb.A);
                if (!U.family_of.count({sumC, sumA})) continue; // outside pool shapes
                sums.checked++;
                auto ss = U.bk.sum_ses(*Fa.seqs[a.cls], *Fb.seqs[b.cls]);
                ClassId id = identify(U, ss);
                if (!id.valid()) { sums.untestable++; continue; }
                if (!bm[id.family][id.cls]) {
                    sums.failures++;
                    if (sums.witness.empty())
                        sums.witness = class_desc(U, a) + " + " + class_desc(U, b);
                }
            }
    }
    rep.entries.push_back(sums);
    // (4)+(5) pushout / pullback closure
    AxiomEntry push{"pushout closure", 0, 0, 0, ""};
    AxiomEntry pull{"pullback closure", 0, 0, 0, ""};
    for (const ReachEdge& e : reach_edges(U, bm)) {
        AxiomEntry& ent = (e.kind == "pushout") ? push : pull;
        if (e.dst_outside) { ent.untestable++; continue; }
        ent.checked++;
        if (!bm[e.dst.family][e.dst.cls]) {
            ent.failures++;
            if (ent.witness.empty())
                ent.witness = e.kind + " of [" + class_desc(U, e.src) + "] along " + e.via +
                              " gives non-member [" + class_desc(U, e.dst) + "]";
        }
    }
    rep.entries.push_back(push);
    rep.entries.push_back(pull);
    // (6)+(7) compositions of deflations / inflations
    AxiomEntry defl{"deflation compositions", 0, 0, 0, ""};
    AxiomEntry infl{"inflation compositions", 0, 0, 0, ""};
    {
        std::vector<ClassId> members;
        for (size_t f = 0; f < U.families.size(); ++f) {
            const auto& F = U.families[f];
            if (F.oversize) continue;
            for (int r : F.orbit_reps)
                if (bm[f][r] && F.seqs[r]) members.push_back({(int)f, r});
        }
        for (const auto& a : members)
            for (const auto& b : members) {
                const auto& sa = *U.families[a.family].seqs[a.cls];
                const auto& sb = *U.families[b.family].seqs[b.cls];
                // d_a : B_a ->> C_a, then d_b : C_a = B_b ->> C_b
                if (sa.C() == sb.B()) {
                    defl.checked++;
                    auto comp = U.bk.comp_defl(sa, sb);
                    ClassId id = comp ? identify(U, *comp) : ClassId{};
                    if (!id.valid()) defl.untestable++;
                    else if (!bm[id.family][id.cls]) {
                        defl.failures++;
                        if (defl.witness.empty())
                            defl.witness = class_desc(U, a) + " then " + class_desc(U, b);
                    }
                }
                if (sa.B() == sb.A()) {
                    infl.checked++;
                    auto comp = U.bk.comp_infl(sa, sb);
                    ClassId id = comp ? identify(U, *comp) : ClassId{};
                    if (!id.valid()) infl.untestable++;
                    else if (!bm[id.family][id.cls]) {
                        infl.failures++;
                        if (infl.witness.empty())
                            infl.witness = class_desc(U, a) + " into " + class_desc(U, b);
                    }
                }
            }
    }
    rep.entries.push_back(defl);
    rep.entries.push_back(infl);
    return rep;
}

// ----------------------------------------------------------------- ext1 ----

struct IncompletePool {
    std::string reason;
};

template <class B>
struct Ext1Result {
    GroupShape shape;
    int family = -1;
    std::vector<int> member_classes; // indices into the family
};

template <class B>
std::variant<Ext1Result<B>, IncompletePool>
ext1(const Universe<B>& U, const Structure<B>& S,
     const typename B::Obj& C, const typename B::Obj& A) {
    auto it = U.family_of.find({C, A});
    if (it == U.family_of.end()) return IncompletePool{"end pair not in the universe"};
    const auto& F = U.families[it->second];
    if (F.oversize) return IncompletePool{"class family above enumeration cap"};
    if (!F.complete) return IncompletePool{"a class realizes outside the object bound"};
    Ext1Result<B> res;
    res.family = it->second;
    std::vector<typename B::Coords> members;
    for (size_t c = 0; c < F.classes.size(); ++c)
        if (S.member(*F.seqs[c])) {
            res.member_classes.push_back((int)c);
            members.push_back(F.classes[c]);
        }
    res.shape = U.bk.subgroup_shape(C, A, members);
    return res;
}

// ------------------------------------------------------------- injectives --

// Certified E-injective indecomposables: complete Ext families against every
// end object, with only the zero class in E.
template <class B>
std::vector<typename B::Obj>
injectives(const Universe<B>& U, const Structure<B>& S) {
    std::vector<typename B::Obj> out;
    for (const auto& I : U.bk.injective_candidates) {
        bool ok = true;
        for (const auto& C : U.bk.end_objects) {
            if (U.bk.obj_is_zero(C)) continue;
            auto it = U.family_of.find({C, I});
            if (it == U.family_of.end()) { ok = false; break; }
            const auto& F = U.families[it->second];
            if (F.oversize || !F.complete) { ok = false; break; }
            for (size_t c = 1; c < F.classes.size(); ++c)
                if (S.member(*F.seqs[c])) { ok = false; break; }
            if (!ok) break;
        }
        if (ok) out.push_back(I);
    }
    return out;
}

// --------------------------------------------------- approximations --------

enum class ApproxStrategy { StackMinimize, ShapeSearch };

struct NotEnoughInjectives {
    std::string witness;
};

// minimal left approximation of X by sums of injectives, as an S-inflation
template <class B>
std::variant<typename B::SesT, NotEnoughInjectives>
left_approximation(const Universe<B>& U, const Structure<B>& S,
                   const typename B::Obj& X,
                   const std::vector<typename B::Obj>& injs,
                   ApproxStrategy strat) {
    using Mor = typename B::Mor;
    using SesT = typename B::SesT;
    auto valid = [&](const Mor& f, SesT& out) {
        auto cs = U.bk.mono_coker(f);
        if (!cs) return false;
        if (!S.member(*cs)) return false;
        for (const auto& J : injs)
            for (const auto& g : U.bk.hom_gens(X, J))
                if (!U.bk.factors(f, g)) return false;
        out = *cs;
        return true;
    };
    if (strat == ApproxStrategy::StackMinimize) {
        std::vector<Mor> parts;
        for (const auto& J : injs)
            for (const auto& g : U.bk.hom_gens(X, J)) parts.push_back(g);
        if (parts.empty()) return NotEnoughInjectives{U.bk.obj_name(X)};
        auto assemble = [&](const std::vector<Mor>& ps) {
            Mor f = ps[0];
            for (size_t i = 1; i < ps.size(); ++i) f = U.bk.stack2(f, ps[i]);
            return f;
        };
        SesT best;
        if (!valid(assemble(parts), best)) return NotEnoughInjectives{U.bk.obj_name(X)};
        // greedy summand elimination, deterministic order
        bool changed = true;
        while (changed && parts.size() > 1) {
            changed = false;
            for (size_t i = parts.size(); i-- > 0;) {
                std::vector<Mor> trial;
                for (size_t j = 0; j < parts.size(); ++j)
                    if (j != i) trial.push_back(parts[j]);
                SesT cand;
                if (!trial.empty() && valid(assemble(trial), cand)) {
                    parts = trial;
                    best = cand;
                    changed = true;
                    break;
                }
            }
        }
        return best;
    }
    // shape search: multisets of injectives by increasing total size
    int max_total = 4;
    for (int total = 1; total <= max_total; ++total) {
        std::vector<std::vector<int>> shapes; // multiset as sorted index list
        std::vector<int> cur;
        std::function<void(int, int)> gen = [&](int from, int left) {
            if (left == 0) { shapes.push_back(cur); return; }
            for (int j = from; j < (int)injs.size(); ++j) {
                cur.push_back(j);
                gen(j, left - 1);
                cur.pop_back();
            }
        };
        gen(0, total);
        for (const auto& sh : shapes) {
            typename B::Obj I = injs[sh[0]];
            for (size_t t = 1; t < sh.size(); ++t) I = U.bk.obj_sum(I, injs[sh[t]]);
            for (const auto& f : U.bk.enumerate_homs(X, I, 1 << 14)) {
                SesT out;
                if (valid(f, out)) return out;
            }
        }
    }
    return NotEnoughInjectives{U.bk.obj_name(X)};
}

// ------------------------------------------------------- coresolutions -----

template <class B>
struct Coresolution {
    std::vector<typename B::SesT> steps;
    enum class Status { Terminated, Periodic, ExceededBound, NotEnoughInjectives } status;
    int length = 0; // Terminated: injective dimension
    int period = 0; // Periodic
    std::string witness;
};

template <class B>
bool obj_in_add(const Universe<B>& U, const typename B::Obj& X,
                const std::vector<typename B::Obj>& gens) {
    for (const auto& s : U.bk.summands(X))
        if (std::find(gens.begin(), gens.end(), s) == gens.end()) return false;
    return true;
}

template <class B>
Coresolution<B> injective_coresolution(const Universe<B>& U, const Structure<B>& S,
                                       const typename B::Obj& X, int bound,
                                       ApproxStrategy strat = ApproxStrategy::StackMinimize,
                                       const std::vector<typename B::Obj>* injs_hint = nullptr) {
    Coresolution<B> out;
    std::vector<typename B::Obj> injs = injs_hint ? *injs_hint : injectives(U, S);
    std::vector<typename B::Obj> seen{X};
    typename B::Obj cur = X;
    int step = 0;
    while (true) {
        if (U.bk.obj_is_zero(cur) || obj_in_add(U, cur, injs)) {
            out.status = Coresolution<B>::Status::Terminated;
            out.length = step;
            return out;
        }
        if (step >= bound) {
            out.status = Coresolution<B>::Status::ExceededBound;
            out.length = step;
            return out;
        }
        auto ap = left_approximation(U, S, cur, injs, strat);
        if (std::holds_alternative<NotEnoughInjectives>(ap)) {
            out.status = Coresolution<B>::Status::NotEnoughInjectives;
            out.witness = std::get<NotEnoughInjectives>(ap).witness;
            return out;
        }
        auto s = std::get<typename B::SesT>(ap);
        out.steps.push_back(s);
        cur = s.C();
        ++step;
        for (size_t i = 0; i < seen.size(); ++i)
            if (seen[i] == cur) {
                out.status = Coresolution<B>::Status::Periodic;
                out.period = (int)(seen.size() - i);
                out.length = step;
                out.witness = U.bk.obj_name(cur);
                return out;
            }
        seen.push_back(cur);
    }
}

// ------------------------------------------------------------------ gldim --

struct GldimInfiniteW {
    std::string witness;
};
struct GldimGreaterThanBound {};
struct GldimUndetermined {
    std::string reason;
};
using GldimResult = std::variant<int, GldimInfiniteW, GldimGreaterThanBound, GldimUndetermined>;

// gldim <= 1 via the right-exactness criterion: for every member sequence s
// and every test object X, Ext^1_S(X, B) -> Ext^1_S(X, C) is surjective.
// The backend evaluates one (s, X) instance.
template <class B>
bool hereditary_right_exactness(const Universe<B>& U, const Structure<B>& S) {
    Bitmap bm = compute_bitmap(U, S);
    typename B::RelExtCtx ctx;
    for (size_t f = 0; f < U.families.size(); ++f) {
        const auto& F = U.families[f];
        if (F.oversize) continue;
        for (int rep : F.orbit_reps) {
            if (!bm[f][rep] || !F.seqs[rep]) continue;
            for (const auto& X : U.bk.test_objects)
                if (!U.bk.relative_ext_right_exact(S.member, *F.seqs[rep], X, ctx)) return false;
        }
    }
    return true;
}

template <class B>
bool splits_only(const Universe<B>& U, const Structure<B>& S) {
    Bitmap bm = compute_bitmap(U, S);
    for (size_t f = 0; f < U.families.size(); ++f)
        for (size_t c = 1; c < bm[f].size(); ++c)
            if (bm[f][c]) return false;
    return true;
}

template <class B>
GldimResult gldim(const Universe<B>& U, const Structure<B>& S, int bound,
                  ApproxStrategy strat = ApproxStrategy::StackMinimize) {
    auto injs = injectives(U, S);
    int mx = 0;
    bool errored = false;
    std::string err_witness;
    for (const auto& X : U.bk.test_objects) {
        auto c = injective_coresolution(U, S, X, bound, strat, &injs);
        switch (c.status) {
        case Coresolution<B>::Status::Terminated:
            mx = std::max(mx, c.length);
            break;
        case Coresolution<B>::Status::Periodic:
            return GldimInfiniteW{"periodic coresolution at " + U.bk.obj_name(X) +
                                  " revisiting " + c.witness};
        case Coresolution<B>::Status::ExceededBound:
            return GldimGreaterThanBound{};
        case Coresolution<B>::Status::NotEnoughInjectives:
            errored = true;
            err_witness = c.witness;
            break;
        }
    }
    if (!errored) return mx;
    // fall back to the Ext-vanishing determination
    if (splits_only(U, S)) return 0;
    if (hereditary_right_exactness(U, S)) return std::max(mx, 1) == 0 ? 0 : 1;
    return GldimUndetermined{"not enough injectives (witness " + err_witness +
                             ") and not hereditary"};
}

// order reversal data: E <= E' iff U_E ⊇ U_E'
template <class B>
bool structure_leq(const Universe<B>& U, const Structure<B>& S, const Structure<B>& T) {
    return bitmap_leq(compute_bitmap(U, S), compute_bitmap(U, T));
}

// ------------------------------------------------------------------ Ext^2 --

struct Ext2Report {
    bool vanishes = true;
    long checked = 0, untestable = 0;
    std::string witness;
};

// Exhaustive splice test over indecomposable test objects: a 2-extension
// beta . alpha vanishes in Ext^2_S iff alpha lies in the image of
// Ext^1_S(B_beta, A) -> Ext^1(Z, A), the pullback along the inflation of beta.
template <class B>
Ext2Report ext2_vanishes(const Universe<B>& U, const Structure<B>& S) {
    Bitmap bm = compute_bitmap(U, S);
    Ext2Report rep;
    for (const auto& Z : U.bk.test_objects)
        for (const auto& A : U.bk.test_objects) {
            auto itZA = U.family_of.find({Z, A});
            if (itZA == U.family_of.end()) { rep.untestable++; continue; }
            const auto& FZA = U.families[itZA->second];
            if (FZA.oversize || !FZA.complete) { rep.untestable++; continue; }
            std::vector<int> alphas;
            for (size_t c = 0; c < FZA.classes.size(); ++c)
                if (bm[itZA->second][c]) alphas.push_back((int)c);
            if (alphas.empty()) continue;
            for (const auto& C : U.bk.test_objects) {
                auto itCZ = U.family_of.find({C, Z});
                if (itCZ == U.family_of.end()) { rep.untestable++; continue; }
                const auto& FCZ = U.families[itCZ->second];
                if (FCZ.oversize) { rep.untestable++; continue; }
                for (size_t b = 0; b < FCZ.classes.size(); ++b) {
                    if (!bm[itCZ->second][b] || !FCZ.seqs[b]) continue;
                    const auto& beta = *FCZ.seqs[b];
                    auto itB = U.family_of.find({beta.B(), A});
                    if (itB == U.family_of.end()) { rep.untestable++; continue; }
                    const auto& FBA = U.families[itB->second];
                    if (FBA.oversize) { rep.untestable++; continue; }
                    // image subgroup of the pullback of Ext^1_S(B_beta, A)
                    std::vector<typename B::Coords> gens;
                    for (size_t x = 0; x < FBA.classes.size(); ++x)
                        if (bm[itB->second][x])
                            gens.push_back(U.bk.coords_pullback(beta.B(), A, beta.i,
                                                                FBA.classes[x]));
                    std::map<typename B::Coords, char> seen;
                    auto zero = FZA.classes[0];
                    for (auto& zc : zero) zc = 0;
                    seen[zero] = 1;
                    std::vector<typename B::Coords> stack{zero};
                    while (!stack.empty()) {
                        auto cur = stack.back();
                        stack.pop_back();
                        for (const auto& g : gens) {
                            auto nx = U.bk.coords_add(Z, A, cur, g);
                            if (!seen.count(nx)) {
                                seen[nx] = 1;
                                stack.push_back(nx);
                            }
                        }
                    }
                    for (int a : alphas) {
                        rep.checked++;
                        if (!seen.count(FZA.classes[a])) {
                            rep.vanishes = false;
                            if (rep.witness.empty())
                                rep.witness = "splice of [" +
                                              class_desc(U, ClassId{itZA->second, a}) +
                                              "] with [" +
                                              class_desc(U, ClassId{itCZ->second, (int)b}) + "]";
                        }
                    }
                }
            }
        }
    return rep;
}

} // namespace exlat::core
