#pragma once

// Exact structures induced by making an additive functor exact: the S_f
// construction with the pullback/pushout closure criterion, hereditary
// torsion pairs and the torsion structure B_t, and the global-dimension
// identity gldim B_t = max(gldim T, gldim F) on the Z_(p)-module desk
// universe.

#include "exlat/dvr_universe.hpp"

namespace exlat::fx {

using dvr::DvrBackend;
using dvr::DvrStructure;
using dvr::DvrUniverse;

// additive endofunctor data on a DVR-module universe
struct DvrFunctor {
    std::string name;
    std::function<dvr::Mod(const dvr::Mod&)> on_obj;
    std::function<dvr::Mor(const dvr::Mor&)> on_mor;
};

DvrFunctor torsion_functor(const PCtx& R);
DvrFunctor free_quotient_functor(const PCtx& R);
DvrFunctor identity_functor();

// functoriality on the universe generators: identities and compositions
bool check_functoriality(const DvrUniverse& U, const DvrFunctor& f);

enum class ExactnessClass { Exact, LeftExact, RightExact, Neither };
ExactnessClass certify_exactness(const DvrUniverse& U, const DvrFunctor& f);

// S_f = { sigma in S : f(sigma) in T }; validity = pullback/pushout closure,
// checked exhaustively on the pool; on failure the violating move is returned
struct InvalidWitness {
    std::string what;
};
std::variant<DvrStructure, InvalidWitness>
induced_structure(const DvrUniverse& U, const DvrFunctor& f, const DvrStructure& S,
                  const DvrStructure& T_target);

// hereditary torsion pair data on the Z_(p) universe: t = torsion part
struct TorsionPairData {
    bool hom_tf_zero = false;     // Hom(T, F) = 0 on the universe
    bool idempotent = false;      // t o t = t
    bool hereditary = false;      // T closed under subobjects on the pool
    std::string witness;          // first failure
};
TorsionPairData torsion_pair_checks(const DvrUniverse& U);

// B_t: both the torsion subsequence and the torsion-free quotient sequence
// are exact; rejects a non-hereditary pair
std::variant<DvrStructure, std::string>
torsion_structure(const DvrUniverse& U, const TorsionPairData& pair);

struct GldimIdentityReport {
    core::GldimResult bt, torsion, free;
    bool equality = false;
    bool ext1_witness = false;           // a nonsplit member of B_t exists
    core::Ext2Report ext2;               // exhaustive splice vanishing for B_t
};
GldimIdentityReport gldim_torsion_identity(int64_t p, int expmax, int rankmax, int bound);

} // namespace exlat::fx
