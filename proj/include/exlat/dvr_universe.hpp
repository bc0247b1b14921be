#pragma once

// Core-exact backend over finitely generated DVR modules: end objects are the
// cyclic modules, R and the mixed R + R/P^e (so that structure separation and
// the free/torsion-augmented companions used by the axiom checks are all in
// the pool), and closed subsets of the truncated Ziegler space give exact
// structures via Hom-exactness at the finite-length points plus the torsion
// test at the adic point.

#include "exlat/core.hpp"
#include "exlat/dvr.hpp"

namespace exlat::dvr {

struct DvrBackend {
    using Obj = Mod;
    using Mor = dvr::Mor;
    using SesT = Ses;
    using Coords = ExtCoords;
    using Descriptor = ClosedSet;

    PCtx R;
    int N = 5;            // end-object torsion exponent bound
    int exp_bound = 10;   // object bound: max torsion exponent (middles)
    int parts_bound = 3;  // object bound: max torsion summands
    int rank_bound = 2;   // object bound: max free rank
    size_t family_cap = 1 << 15;
    std::vector<Obj> end_objects, a_end_objects, test_objects, injective_candidates;

    struct RelExtCtx {
        std::map<std::pair<Mod, Mod>, std::vector<std::pair<ExtCoords, char>>> sub;
    };

    std::string obj_name(const Obj& o) const { return mod_name(o); }
    bool obj_is_zero(const Obj& o) const { return o.is_zero(); }
    bool within_bounds(const Obj& o) const;
    std::vector<Obj> summands(const Obj& o) const;
    Obj obj_sum(const Obj& a, const Obj& b) const { return mod_sum(a, b); }

    std::vector<int64_t> coord_radix(const Obj& C, const Obj& A) const;
    std::optional<SesT> realize(const Obj& C, const Obj& A, const Coords& z) const;
    Coords extract(const SesT& s) const { return extract_ext(R, s); }
    Coords coords_add(const Obj& C, const Obj& A, const Coords& x, const Coords& y) const {
        return ext_coords_add(R, C, A, x, y);
    }
    Coords coords_pushforward(const Obj& C, const Obj& A, const Mor& f, const Coords& z) const {
        return ext_coords_pushforward(R, C, A, f, z);
    }
    Coords coords_pullback(const Obj& C, const Obj& A, const Mor& w, const Coords& z) const {
        return ext_coords_pullback(R, C, A, w, z);
    }
    GroupShape subgroup_shape(const Obj& C, const Obj& A,
                              const std::vector<Coords>& members) const;

    std::vector<Mor> aut_gens(const Obj& o) const;
    Coords act_push(const Obj& C, const Obj& A, const Mor& u, const Coords& z) const {
        return ext_coords_pushforward(R, C, A, u, z);
    }
    Coords act_pull(const Obj& C, const Obj& A, const Mor& w, const Coords& z) const {
        return ext_coords_pullback(R, C, A, w, z);
    }

    std::vector<Mor> hom_gens(const Obj& A, const Obj& B) const;
    std::optional<SesT> push_out(const SesT& s, const Mor& f) const;
    std::optional<SesT> pull_back(const SesT& s, const Mor& g) const;
    std::optional<SesT> comp_defl(const SesT& s1, const SesT& s2) const;
    std::optional<SesT> comp_infl(const SesT& s1, const SesT& s2) const;
    SesT sum_ses(const SesT& a, const SesT& b) const { return ses_sum(R, a, b); }
    SesT make_split(const Obj& A, const Obj& C) const { return split_ses(R, A, C); }

    std::optional<SesT> mono_coker(const Mor& f) const;
    bool factors(const Mor& f, const Mor& g) const;
    Mor stack2(const Mor& f, const Mor& g) const;
    std::vector<Mor> enumerate_homs(const Obj& X, const Obj& I, size_t cap) const;
    std::string mor_desc(const Mor& f) const;

    bool relative_ext_right_exact(const std::function<bool(const SesT&)>& member,
                                  const SesT& s, const Obj& X, RelExtCtx& ctx) const;
    bool relative_ext_right_exact(const std::function<bool(const SesT&)>& member,
                                  const SesT& s, const Obj& X) const {
        RelExtCtx ctx;
        return relative_ext_right_exact(member, s, X, ctx);
    }

    core::Structure<DvrBackend> structure_from_descriptor(const Descriptor& d) const;
    static Descriptor descriptor_union(const Descriptor& a, const Descriptor& b);
    static Descriptor descriptor_intersect(const Descriptor& a, const Descriptor& b);
};

// Standard DVR universe at bound N (ends: 0, R/P^e, R, R + R/P^e).
DvrBackend make_dvr_backend(int64_t p, int N);
// Z_(p)-module desk universe for the torsion-pair checks: all end objects with
// at most two torsion summands of exponent <= expmax and free rank <= rankmax.
DvrBackend make_zmod_backend(int64_t p, int expmax, int rankmax);

using DvrUniverse = core::Universe<DvrBackend>;
using DvrStructure = core::Structure<DvrBackend>;

DvrUniverse build_dvr_universe(int64_t p, int N);

// the exact structure attached to a truncated closed set
DvrStructure closed_set_structure(const DvrUniverse& U, const ClosedSet& u);
DvrStructure split_structure(const DvrUniverse& U);

// round trip: the set of points whose structure conditions E satisfies;
// finite-length point n is in iff R/P^n is certified E-injective, the adic
// point iff E is contained in E' on the pool.
ClosedSet points_of(const DvrUniverse& U, const DvrStructure& S);

// closure via the bijection: points_of(structure_from(S)) with an optional
// infinite tail (forces the adic point, rule (2)).
ClosedSet closure_roundtrip(const DvrUniverse& U, const std::set<int>& finite,
                            bool adic, bool infinite_tail);

// Precomputed exactness profiles for fast lattice work: for every pool class,
// the Hom(-, R/P^t)-exactness bits (t = 1..maxt) and the torsion-functor test.
struct DvrProfiles {
    int maxt = 0;
    std::vector<std::vector<uint32_t>> exact_mask; // [family][class], bit t-1
    std::vector<std::vector<char>> eprime;
};

DvrProfiles build_profiles(const DvrUniverse& U, int maxt);
core::Bitmap profile_bitmap(const DvrUniverse& U, const DvrProfiles& P, const ClosedSet& u);
ClosedSet profile_points_of(const DvrUniverse& U, const DvrProfiles& P, const core::Bitmap& bm);

} // namespace exlat::dvr
