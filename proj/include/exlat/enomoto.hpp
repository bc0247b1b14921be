#pragma once

// Representation-finite classification: AR models as certified data (interval
// indecomposables, hom/ext tables, explicit almost split sequences), the
// Boolean lattice of generators, the exact structure attached to a generator
// via Hom-exactness, and global dimensions per structure.

#include "exlat/anq.hpp"

#include "json.hpp"

namespace exlat::eno {

using anq::AnBackend;
using anq::Interval;
using anq::Intervals;

struct ARModel {
    std::string name;
    AnBackend bk;
    std::vector<Interval> indecs;
    std::vector<std::string> indec_names;
    std::vector<char> projective, injective;
    std::vector<std::vector<int>> hom_dims, ext_dims;
    std::vector<AnBackend::SesT> ar_sequences;

    int index_of(Interval iv) const;
};

// the hand-built models, certified on construction
ARModel a3_model(int64_t q = 2);
ARModel a2_model(int64_t q = 2);

// re-derive every table entry and certificate from the engine; throws on any
// mismatch (model data is data, not trusted)
void certify_model(const ARModel& m);

nlohmann::json model_to_json(const ARModel& m);
ARModel model_from_json(const nlohmann::json& j, int64_t q = 2);

// generator subcategories: additively closed subcategories containing the
// projectives, as sorted lists of indecomposables
using Generator = std::vector<Interval>;

std::vector<Generator> enumerate_generators(const ARModel& m);
core::Structure<AnBackend> structure_from_generator(const ARModel& m, const Generator& g);

// projectives of a structure, computed over the model universe
std::vector<Interval> structure_projectives(const ARModel& m,
                                            const core::Universe<AnBackend>& U,
                                            const core::Structure<AnBackend>& S);

struct ClassifiedStructure {
    Generator generator;
    core::GldimResult gldim;
    bool round_trip_ok = false;
};

std::vector<ClassifiedStructure> classify_by_gldim(const ARModel& m);

nlohmann::json lattice_json(const ARModel& m, const std::vector<ClassifiedStructure>& nodes);
std::string lattice_dot(const ARModel& m, const std::vector<ClassifiedStructure>& nodes);

} // namespace exlat::eno
