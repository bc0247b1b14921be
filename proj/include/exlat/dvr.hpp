#pragma once

// Finitely generated modules over a discrete valuation ring R (model: Z
// localized at p, exact bounded-precision arithmetic), morphisms as matrices
// over R, exactness certificates by Smith normal form, the closed-form
// Hom/Ext/radical structure with its sigma_{a,b} class labels, membership
// tests for the structures E_L and E', gap detection with the periodic
// coresolutions, the truncated Ziegler space, and the Dedekind (Z with finite
// prime support) layer.

#include "exlat/pmatrix.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace exlat::dvr {

// M = R/P^{e_1} + ... + R/P^{e_t} + R^free_rank, exponents descending.
// Summand order: torsion summands first, then free ones.
struct Mod {
    std::vector<int> exps; // descending
    int free_rank = 0;

    int n() const { return (int)exps.size() + free_rank; }
    int torsion_count() const { return (int)exps.size(); }
    bool is_torsion_summand(int i) const { return i < (int)exps.size(); }
    bool is_zero() const { return exps.empty() && free_rank == 0; }
    int length() const { int s = 0; for (int e : exps) s += e; return s; } // torsion length

    auto operator<=>(const Mod&) const = default;
};

Mod mod_cyclic(int e);
Mod mod_free(int r);
Mod make_mod(std::vector<int> exps, int free_rank); // sorts
Mod mod_sum(const Mod& a, const Mod& b);
std::string mod_name(const Mod& m);

// annihilator exponent of summand i (R.k for free summands)
int ann_exp(const PCtx& R, const Mod& m, int i);

// f : src -> dst given by matrix m (dst.n() x src.n()); entry (i,j) is the
// scalar of the component src_j -> dst_i, constrained by
// val(entry) + ann(src_j) >= ann(dst_i).
struct Mor {
    Mod src, dst;
    PMat m;
};

bool mor_valid(const PCtx& R, const Mor& f);
Mor mor_zero(const Mod& src, const Mod& dst);
Mor mor_identity(const Mod& a);
Mor mor_compose(const PCtx& R, const Mor& g, const Mor& f); // g after f
Mor mor_add(const PCtx& R, const Mor& f, const Mor& g);
Mor mor_sum(const PCtx& R, const Mor& f, const Mor& g); // block diagonal f+g with canonical reordering
bool mor_equal(const PCtx& R, const Mor& f, const Mor& g);
bool mor_is_iso(const PCtx& R, const Mor& f);

// canonical inclusions/projections for mod_sum(a, b)
Mor incl_first(const PCtx& R, const Mod& a, const Mod& b);
Mor incl_second(const PCtx& R, const Mod& a, const Mod& b);
Mor proj_first(const PCtx& R, const Mod& a, const Mod& b);
Mor proj_second(const PCtx& R, const Mod& a, const Mod& b);

// Hom(A, B) as a finite(ly generated) abelian group: one cyclic block per
// summand pair, generated by the minimal-valuation elementary morphism.
struct HomBlock {
    int dst_idx, src_idx;
    int ord_exp;     // block is Z/p^ord_exp (R.k for the free-free block: R)
    int min_val;     // valuation of the generator entry
};
std::vector<HomBlock> hom_blocks(const PCtx& R, const Mod& A, const Mod& B);
Mor hom_block_generator(const PCtx& R, const Mod& A, const Mod& B, const HomBlock& blk);

struct GroupShape {
    std::vector<int> torsion_exps; // descending
    int free_rank = 0;
    auto operator<=>(const GroupShape&) const = default;
};
GroupShape hom_group(const PCtx& R, const Mod& A, const Mod& B); // closed form
GroupShape ext_group(const PCtx& R, const Mod& C, const Mod& A); // closed form

// --- short exact sequences -------------------------------------------------

struct Ses {
    Mor i, d; // A = i.src, B = i.dst = d.src, C = d.dst
    const Mod& A() const { return i.src; }
    const Mod& B() const { return i.dst; }
    const Mod& C() const { return d.dst; }
};

struct SesRejection {
    std::string reason; // "not a complex" | "not injective" | "not surjective" | "homology nonzero"
};

// Exactness certificate: checks d i = 0, i kernel of d, d cokernel of i.
// Malformed data (shape/constraint violations) throws std::invalid_argument.
std::variant<Ses, SesRejection> certify_ses(const PCtx& R, const Mor& i, const Mor& d);
bool is_split_ses(const PCtx& R, const Ses& s);

Ses split_ses(const PCtx& R, const Mod& A, const Mod& C);
Ses ses_sum(const PCtx& R, const Ses& s1, const Ses& s2);

// --- Ext classes -----------------------------------------------------------

// Ext^1(C, A) = ⊕ blocks over (torsion summand j of C) x (summand i of A);
// block (j, i) is Z/p^min(c_j, a_i)  (a_i = c_j for free A_i).
struct ExtBlock {
    int c_idx, a_idx;
    int ord_exp;
};
std::vector<ExtBlock> ext_blocks(const PCtx& R, const Mod& C, const Mod& A);

using ExtCoords = std::vector<int64_t>; // one residue per block, mod p^ord

ExtCoords ext_zero(const PCtx& R, const Mod& C, const Mod& A);
bool ext_coords_equal(const PCtx& R, const Mod& C, const Mod& A, const ExtCoords&, const ExtCoords&);
ExtCoords ext_coords_add(const PCtx& R, const Mod& C, const Mod& A, const ExtCoords&, const ExtCoords&);
ExtCoords ext_coords_scale(const PCtx& R, const Mod& C, const Mod& A, int64_t s, const ExtCoords&);

// Realize a class as an explicit certified sequence; extract the class of a
// concrete sequence. realize(extract(s)) is Yoneda-equivalent to s.
Ses realize_ext(const PCtx& R, const Mod& C, const Mod& A, const ExtCoords& z);
ExtCoords extract_ext(const PCtx& R, const Ses& s);

Ses baer_sum(const PCtx& R, const Ses& s1, const Ses& s2);

// pushout of s along f : A -> A'; pullback along g : C' -> C.
Ses pushout(const PCtx& R, const Ses& s, const Mor& f);
Ses pullback(const PCtx& R, const Ses& s, const Mor& g);

// kernel sequence of the composed deflation  B ->> C ->> D, where s1 has
// deflation B ->> C and s2 has middle C with deflation C ->> D.
Ses compose_deflations(const PCtx& R, const Ses& s1, const Ses& s2);

// induced maps on Ext coordinates
ExtCoords ext_pushforward(const PCtx& R, const Ses&, const Mor& f);            // realize-free: f_* on extract
ExtCoords ext_coords_pushforward(const PCtx& R, const Mod& C, const Mod& A,
                                 const Mor& f, const ExtCoords& z);            // Ext(C,A) -> Ext(C,A') along f:A->A'
ExtCoords ext_coords_pullback(const PCtx& R, const Mod& C, const Mod& A,
                              const Mor& w, const ExtCoords& z);               // Ext(C,A) -> Ext(C',A) along w:C'->C

// cokernel sequence of a monomorphism f : A >-> B, as A >-> B ->> coker(f)
Ses cokernel_ses(const PCtx& R, const Mor& f);

// --- the paper's class labels ---------------------------------------------

// Label sigma_a for the extension of R/P^m by R/P^ell (ell >= 1) with middle
// R/P^a + R/P^(m+ell-a), or by R (ell = kFree) with middle R/P^a + R.
// 0 <= a <= s where s = min(m, ell) resp. s = m; a == s is the split class.
inline constexpr int kFree = -1;

struct ExtLabel {
    int m = 1;
    int ell = 1; // or kFree
    int a = 0;

    int s() const { return ell == kFree ? m : std::min(m, ell); }
    bool is_split() const { return a == s(); }
    auto operator<=>(const ExtLabel&) const = default;
};

bool label_valid(const ExtLabel& x);
ExtLabel p_action(const ExtLabel& x); // multiply by p; invalid label throws
Ses realize_label(const PCtx& R, const ExtLabel& x); // certified + class-checked
ExtCoords label_coords(const PCtx& R, const ExtLabel& x);

// rad^n Ext^1(R/P^m, R/P^ell|R): shape + generator label (if nonzero)
struct RadExt {
    GroupShape shape;
    std::optional<ExtLabel> generator;
    std::vector<ExtLabel> labels; // sigma_a for a in [n, s], split last
};
RadExt rad_ext(const PCtx& R, int n, int m, int ell /* or kFree */);

// --- structure membership ---------------------------------------------------

// Hom(sigma, R/P^t) exact (the restriction map Hom(B,.) -> Hom(A,.) onto)?
bool hom_exact_at(const PCtx& R, const Ses& s, int t);

struct ExponentSet {
    std::set<int> L;
    bool infinite_tail = false;
};

bool is_exact_EL(const PCtx& R, const Ses& s, const std::set<int>& L);
// E': torsion part and torsion-free quotient both exact
bool is_exact_Eprime(const PCtx& R, const Ses& s);

Ses torsion_part_seq(const PCtx& R, const Ses& s);   // t(sigma) as complex (certify separately)
// torsion restriction / free quotient of a morphism
Mor torsion_restrict(const PCtx& R, const Mor& f);
Mor free_quotient(const PCtx& R, const Mor& f);

// --- truncated Ziegler space ------------------------------------------------

// Points: FiniteLength(1..N) and Adic; U_max = {Q, Pruefer} is an implicit
// decoration on every set (the topology lives on Zg \ U_max).
struct ClosedSet {
    std::set<int> finite;
    bool adic = false;
    auto operator<=>(const ClosedSet&) const = default;
};

std::vector<ClosedSet> classify_closed_sets(int N);
// smallest closed superset; infinite_tail forces Adic
ClosedSet closure_symbolic(const std::set<int>& finite, bool adic, bool infinite_tail, int N);

// --- gaps and global dimension ----------------------------------------------

struct Gap {
    int a, b;
    auto operator<=>(const Gap&) const = default;
};
std::optional<Gap> gap_detect(const std::set<int>& L, int N);

struct CoresStep { Ses s; };
struct PeriodicCoresolution {
    std::vector<Ses> steps; // steps.size() = period
    int s_exp;              // the resolved object R/P^s
    int period;
};
// The explicit periodic injective E_L-coresolution witnessing a gap [a,b].
// Every step is certified, lies in E_L (and E'_L), and has E_L-injective middle.
PeriodicCoresolution periodic_coresolution(const PCtx& R, const std::set<int>& L, Gap g);

struct GldimInfinite { PeriodicCoresolution witness; };
using GldimEL = std::variant<int, GldimInfinite>;
// gldim of E_L (or E'_L when with_adic; L may then carry an infinite tail):
// gaps => Infinite with witness; L = [1,n] => 1; split case => 0.
GldimEL gldim_EL(const PCtx& R, const ExponentSet& L, bool with_adic, int N);

// --- Dedekind layer (R = Z, finite prime support) ----------------------------

struct DedekindModule {
    std::map<int64_t, Mod> parts; // prime -> localization (torsion only)
    int free_rank = 0;
};

struct DedekindExtComponent {
    int64_t prime;
    GroupShape full;      // Ext^1(X,Y)_P
    GroupShape component; // rad_P^{n_P} Ext or full, per membership of P in M
    bool in_M;
    int n_P; // 0 when not in M
};

// Ext^1(X, Y) decomposed prime by prime; for P in M the component is
// rad_P^{n_P} Ext, otherwise (the tor(M^c) part) the full prime component.
std::vector<DedekindExtComponent>
dedekind_ext_decompose(const std::vector<int64_t>& support,
                       const DedekindModule& X, const DedekindModule& Y,
                       const std::map<int64_t, int>& M_with_n);

struct DedekindClosedSet {
    std::map<int64_t, std::set<int>> finite; // prime -> exponents
    std::set<int64_t> adic;                  // primes P with the adic point in
    auto operator<=>(const DedekindClosedSet&) const = default;
};

// rule check: finite L and M independent (types 1,2); an infinite tail at P
// forces the adic point at P (type 3, M ⊇ M_L).
bool dedekind_is_closed(const DedekindClosedSet& U,
                        const std::map<int64_t, bool>& infinite_tail);
std::vector<DedekindClosedSet>
dedekind_classify_closed(const std::vector<int64_t>& primes, int N);

} // namespace exlat::dvr
