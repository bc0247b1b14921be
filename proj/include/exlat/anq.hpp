#pragma once

// Representations of the equioriented quiver 1 -> 2 -> ... -> n over a prime
// field, with interval decomposition by the rank inclusion-exclusion formula,
// Hom/Ext by intertwiner systems and cocycles, and a core-exact backend whose
// objects are interval multisets. This carries the representation-finite
// (Enomoto) models.

#include "exlat/core.hpp"
#include "exlat/fq.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace exlat::anq {

using Interval = std::pair<int, int>;          // [a, b], 1-indexed
using Intervals = std::vector<Interval>;       // sorted multiset

struct AnRep {
    std::vector<int> dims;      // n vertex dimensions
    std::vector<FqMat> maps;    // maps[v] : V_{v+1} <- V_v, size n-1
    int n() const { return (int)dims.size(); }
    int total_dim() const { int s = 0; for (int d : dims) s += d; return s; }
};

struct AnMor {
    std::vector<FqMat> comps;   // comps[v] : dst_v <- src_v
};

struct AnCat {
    FqField F;
    int n = 3;

    AnCat() = default;
    AnCat(int64_t q, int n_) : F(q), n(n_) {}

    AnRep interval_rep(Interval iv) const;
    AnRep rep_of(const Intervals& m) const;   // block diagonal, in multiset order
    Intervals decompose(const AnRep& X) const;

    AnMor zero_mor(const AnRep& X, const AnRep& Y) const;
    AnMor id_mor(const AnRep& X) const;
    AnMor compose(const AnRep& X, const AnRep& Y, const AnRep& Z,
                  const AnMor& g, const AnMor& f) const; // g after f
    AnMor add(const AnMor& f, const AnMor& g) const;
    AnMor scale(int64_t c, const AnMor& f) const;
    bool is_mor(const AnRep& X, const AnRep& Y, const AnMor& f) const;
    bool is_iso(const AnMor& f) const;

    std::vector<AnMor> hom_basis(const AnRep& X, const AnRep& Y) const;
    int hom_dim(const AnRep& X, const AnRep& Y) const { return (int)hom_basis(X, Y).size(); }

    // Ext^1(C, A): cocycles (z_v : A_{v+1} <- C_v) modulo coboundaries
    struct ExtPres {
        int dim = 0;                       // dim of Ext
        std::vector<int> coord_pos;        // positions of the quotient coordinates
        FqMat reducer;                     // rref rows spanning the coboundary space
        std::vector<int> piv;              // pivots of the reducer
        int cocycle_len = 0;
    };
    ExtPres ext_pres(const AnRep& C, const AnRep& A) const;
    std::vector<int64_t> reduce_cocycle(const ExtPres& P, std::vector<int64_t> v) const;
    std::vector<int64_t> unreduce(const ExtPres& P, const std::vector<int64_t>& coords) const;
    std::vector<int64_t> flatten_cocycle(const AnRep& C, const AnRep& A,
                                         const std::vector<FqMat>& z) const;
    std::vector<FqMat> unflatten_cocycle(const AnRep& C, const AnRep& A,
                                         const std::vector<int64_t>& v) const;

    // kernels and cokernels of morphisms, with the structure maps induced
    struct SubQuot {
        AnRep rep;
        AnMor map; // inclusion (kernel) or projection (cokernel)
    };
    SubQuot kernel(const AnRep& B, const AnRep& D, const AnMor& g) const;
    SubQuot cokernel(const AnRep& A, const AnRep& B, const AnMor& f) const;

    std::optional<AnMor> find_iso(const AnRep& X, const AnRep& Y, size_t cap = 1 << 16) const;
};

// ------------------------------------------------------------- backend -----

struct AnBackend {
    using Obj = Intervals;
    struct Mor {
        Obj src, dst;
        AnMor m;
    };
    struct SesT {
        Obj a, b, c;
        AnMor i, d; // on rep_of(a) -> rep_of(b) -> rep_of(c)
        const Obj& A() const { return a; }
        const Obj& B() const { return b; }
        const Obj& C() const { return c; }
    };
    using Coords = std::vector<int64_t>;
    using Descriptor = Intervals; // generator subcategory: sorted distinct intervals

    AnCat cat;
    size_t family_cap = 1 << 14;
    std::vector<Obj> end_objects, a_end_objects, test_objects, injective_candidates;

    struct RelExtCtx {
        int unused = 0;
    };

    std::string obj_name(const Obj& o) const;
    bool obj_is_zero(const Obj& o) const { return o.empty(); }
    bool within_bounds(const Obj&) const { return true; }
    std::vector<Obj> summands(const Obj& o) const;
    Obj obj_sum(const Obj& a, const Obj& b) const;

    std::vector<int64_t> coord_radix(const Obj& C, const Obj& A) const;
    std::optional<SesT> realize(const Obj& C, const Obj& A, const Coords& z) const;
    Coords extract(const SesT& s) const;
    Coords coords_add(const Obj& C, const Obj& A, const Coords& x, const Coords& y) const;
    core::GroupShape subgroup_shape(const Obj& C, const Obj& A,
                              const std::vector<Coords>& members) const;

    std::vector<Mor> aut_gens(const Obj& o) const;
    Coords act_push(const Obj& C, const Obj& A, const Mor& u, const Coords& z) const;
    Coords act_pull(const Obj& C, const Obj& A, const Mor& w, const Coords& z) const;

    std::vector<Mor> hom_gens(const Obj& A, const Obj& B) const;
    std::optional<SesT> push_out(const SesT& s, const Mor& f) const;
    std::optional<SesT> pull_back(const SesT& s, const Mor& g) const;
    std::optional<SesT> comp_defl(const SesT& s1, const SesT& s2) const;
    std::optional<SesT> comp_infl(const SesT& s1, const SesT& s2) const;
    SesT sum_ses(const SesT& x, const SesT& y) const;
    SesT make_split(const Obj& A, const Obj& C) const;

    std::optional<SesT> mono_coker(const Mor& f) const;
    bool factors(const Mor& f, const Mor& g) const;
    Mor stack2(const Mor& f, const Mor& g) const;
    std::vector<Mor> enumerate_homs(const Obj& X, const Obj& I, size_t cap) const;
    std::string mor_desc(const Mor& f) const;

    bool relative_ext_right_exact(const std::function<bool(const SesT&)>& member,
                                  const SesT& s, const Obj& X) const;
    bool relative_ext_right_exact(const std::function<bool(const SesT&)>& member,
                                  const SesT& s, const Obj& X, RelExtCtx&) const {
        return relative_ext_right_exact(member, s, X);
    }

    core::Structure<AnBackend> structure_from_descriptor(const Descriptor& d) const;
    static Descriptor descriptor_union(const Descriptor& a, const Descriptor& b);
    static Descriptor descriptor_intersect(const Descriptor& a, const Descriptor& b);

    // build a certified sequence from explicit data (throws on failure)
    SesT make_ses(const Obj& A, const Obj& B, const Obj& C,
                  const AnMor& i, const AnMor& d) const;
};

AnBackend make_an_backend(int64_t q, int n);
using AnUniverse = core::Universe<AnBackend>;

} // namespace exlat::anq
