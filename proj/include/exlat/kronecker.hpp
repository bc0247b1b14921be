#pragma once

// The Kronecker quiver (two arrows 2 -> 1) over a prime field: explicit
// preprojective / preinjective / regular-tube indecomposables, Hom and Ext by
// linear algebra with the Euler-form cross-check, symbolic Ziegler points
// (Pruefer and adic towers with stabilization windows, the generic module over
// the rational function field), Ringel's closedness rules, the type (I) Ext
// tables and 2-extension witnesses, and the Auslander-Solberg type (II)
// structures with their coresolution probes.

#include "exlat/fq.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace exlat::kron {

template <class F>
struct KRep {
    int d1 = 0, d2 = 0;
    FMat<F> alpha, beta; // d1 x d2
};

template <class F>
struct KMor {
    FMat<F> f1, f2; // f1: dst.d1 x src.d1, f2: dst.d2 x src.d2
};

// one of: Preproj(n) (n+1, n), Preinj(n) (n, n+1), Regular(lambda, k) (k, k);
// lambda in 0..q-1 are the finite points, lambda = q is infinity
struct IndecLabel {
    enum class Kind { Preproj, Preinj, Regular } kind = Kind::Preproj;
    int n = 0;
    int lambda = 0;
    int k = 1;
    auto operator<=>(const IndecLabel&) const = default;
};
std::string label_name(const IndecLabel& l);
std::pair<int, int> label_dims(const IndecLabel& l);

struct KZieglerPoint {
    enum class Kind { FiniteDim, Pruefer, Adic, Generic } kind = Kind::Generic;
    IndecLabel fin;  // FiniteDim
    int lambda = 0;  // Pruefer / Adic
    auto operator<=>(const KZieglerPoint&) const = default;
};
std::string point_name(const KZieglerPoint& p);

struct StabilizationFailure {
    std::string what;
};

// ----------------------------------------------------- rep-level algebra ---

// Euler form of the Kronecker quiver: <x, y> = x1 y1 + x2 y2 - 2 x2 y1
int euler(const std::pair<int, int>& x, const std::pair<int, int>& y);

template <class F>
std::vector<KMor<F>> khom_basis(const F& k, const KRep<F>& X, const KRep<F>& Y);

template <class F>
struct KExtPres {
    int dim = 0;
    std::vector<int> coord_pos;
    FMat<F> reducer;
    std::vector<int> piv;
    int cocycle_len = 0; // 2 * A.d1 * C.d2
};

template <class F>
KExtPres<F> kext_pres(const F& k, const KRep<F>& C, const KRep<F>& A);

template <class F>
std::vector<typename F::Elem> kreduce(const F& k, const KExtPres<F>& P,
                                      std::vector<typename F::Elem> v);

// cocycle pair (z_alpha, z_beta), each C.d2 -> A.d1, flattened
template <class F>
std::vector<typename F::Elem> kflatten(const F& k, const KRep<F>& C, const KRep<F>& A,
                                       const FMat<F>& za, const FMat<F>& zb);

struct KCat {
    FqField F;
    int omega() const { return (int)F.q + 1; } // tube index set 0..q (q = infinity)

    KRep<FqField> rep(const IndecLabel& l) const;
    KRep<FqField> rep_of(const std::vector<IndecLabel>& m) const; // block sums
    KRep<FqField> zero_rep() const { return {}; }
    KRep<FqField> sum(const KRep<FqField>& a, const KRep<FqField>& b) const;

    int hom_dim(const KRep<FqField>& X, const KRep<FqField>& Y) const;
    // dual-route Ext dimension: Euler defect vs cokernel of the intertwiner
    // defect map; disagreement throws
    int ext_dim(const KRep<FqField>& X, const KRep<FqField>& Y) const;

    bool end_is_local(const KRep<FqField>& X, size_t cap = 1 << 21) const;
    IndecLabel certify_indec(const IndecLabel& l) const; // build + End local check

    // decomposition into the rational candidates by Hom-counting; throws if
    // the candidate system cannot certify (e.g. a higher-degree tube summand)
    std::vector<IndecLabel> decompose(const KRep<FqField>& X) const;

    // concrete short exact sequences
    struct Ses {
        KRep<FqField> A, B, C;
        KMor<FqField> i, d;
    };
    Ses make_ses(const KRep<FqField>& A, const KRep<FqField>& B, const KRep<FqField>& C,
                 const KMor<FqField>& i, const KMor<FqField>& d) const;
    Ses realize(const KRep<FqField>& C, const KRep<FqField>& A,
                const std::vector<int64_t>& coords) const;
    std::vector<int64_t> extract(const Ses& s) const;

    // tube towers
    KRep<FqField> tube_rep(int lambda, int k) const { return rep(IndecLabel{IndecLabel::Kind::Regular, 0, lambda, k}); }
    KMor<FqField> tube_incl(int lambda, int k) const;  // S[k] -> S[k+1]
    KMor<FqField> tube_quot(int lambda, int k) const;  // S[k+1] -> S[k]
    KMor<FqField> compose(const KMor<FqField>& g, const KMor<FqField>& f) const;

    // the generic module over F_q(T)
    FuncField func_field() const { return FuncField(F.q); }
    KRep<FuncField> generic_rep() const;
    KRep<FuncField> lift(const KRep<FqField>& X) const;

    // Hom(sigma, point) exactness; Pruefer/adic evaluated on truncation towers
    // with the given stabilization window
    std::variant<bool, StabilizationFailure>
    hom_exactness_at_point(const Ses& s, const KZieglerPoint& pt, int window = 4) const;

    // vanishing probes for the displayed table
    std::variant<bool, StabilizationFailure>
    hom_vanishes(const KRep<FqField>& X, const KZieglerPoint& pt, int window = 4) const;
    std::variant<bool, StabilizationFailure>
    ext_vanishes(const KRep<FqField>& X, const KZieglerPoint& pt, int window = 4) const;

    // membership subspace of Ext^1(C, A) for the structure E^points
    struct Subspace {
        int ambient_dim = 0;
        int dim = 0;
        std::vector<std::vector<int64_t>> basis;
    };
    std::variant<Subspace, StabilizationFailure>
    membership_subspace(const KRep<FqField>& C, const KRep<FqField>& A,
                        const std::vector<KZieglerPoint>& points, int window = 4) const;
};

// ------------------------------------------------------- Ziegler rules -----

struct KClosedSetDescr {
    std::vector<IndecLabel> fin;     // explicit finite-dimensional points
    bool pp_infinite = false;        // infinitely many preprojectives flagged
    bool pi_infinite = false;
    std::set<int> tubes_infinite;    // lambdas with infinitely many S_l[k]
    std::set<int> T, M;              // Pruefer / adic subsets of Omega
    bool generic = false;
    auto operator<=>(const KClosedSetDescr&) const = default;
};

struct RuleViolation {
    std::string rule; // "(a)" | "(b)" | "(c1)" | "(c2)" | "(c3)"
    std::string witness;
};

std::vector<RuleViolation> ziegler_closed_violations(const KCat& cat, const KClosedSetDescr& u);
bool is_ziegler_closed(const KCat& cat, const KClosedSetDescr& u);
KClosedSetDescr ziegler_closure(const KCat& cat, KClosedSetDescr u);

// --------------------------------------------------------- type (I) --------

enum class KClass { P, R, Q }; // R carries a tube index

struct TypeISpec {
    enum class Kind { Generic, Adic, Pruefer, AllAdic, AllPruefer, AllBoth } kind;
    int lambda = 0; // Adic / Pruefer
};
std::vector<KZieglerPoint> typeI_points(const KCat& cat, const TypeISpec& spec);

struct TypeICell {
    enum class Value { Full, Zero, Mixed } value;
};

// cells over ordered pairs (X-class, Y-class) with tube resolution; evaluated
// on representatives up to the given bounds
struct TypeITable {
    // key: (x-class, x-lambda or -1, y-class, y-lambda or -1)
    std::map<std::tuple<int, int, int, int>, TypeICell::Value> cells;
    int stabilization_failures = 0;
};
TypeITable typeI_ext_table(const KCat& cat, const TypeISpec& spec, int pp_max, int tube_max,
                           int window = 4);

// the expected Full/Zero pattern from the paper
TypeITable typeI_expected_table(const KCat& cat, const TypeISpec& spec);

// 2-extension witness: P0 >-> P1 -> Q1 ->> Q0 through a regular simple S_mu,
// both halves in E^U, with the splice class certified nonzero in Ext^2
struct Gldim2Witness {
    KCat::Ses half1, half2; // P0 >-> P1 ->> S_mu and S_mu >-> Q1 ->> Q0
    bool halves_in_structure = false;
    bool splice_nonzero = false;
    int mu = 0;
};
std::variant<Gldim2Witness, StabilizationFailure>
gldim2_witness(const KCat& cat, const TypeISpec& spec, int window = 4);

// --------------------------------------------------------- type (II) -------

struct TypeIICoresolution {
    std::vector<std::vector<IndecLabel>> injective_terms; // decomposed I^j
    enum class Status { Terminated, Periodic, ExceededBound } status;
    int idim = 0;   // Terminated
    int period = 0; // Periodic
};

// minimal injective coresolution of X in the structure F^H (Hom(-, H) exact),
// injectives add(H)
TypeIICoresolution typeII_idim(const KCat& cat, const std::vector<IndecLabel>& H,
                               const IndecLabel& X, int bound);

// membership of a concrete sequence in F^H
bool typeII_member(const KCat& cat, const std::vector<IndecLabel>& H, const KCat::Ses& s);

} // namespace exlat::kron
