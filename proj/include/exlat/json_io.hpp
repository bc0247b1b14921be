#pragma once

// JSON emission for the file interfaces: universe files with
// {objects, homs, ses}, axiom reports, deterministic key order throughout
// (nlohmann::json objects iterate alphabetically).

#include "exlat/core.hpp"
#include "exlat/dvr_universe.hpp"

#include "json.hpp"

namespace exlat::io {

nlohmann::json universe_to_json(const dvr::DvrUniverse& U);
nlohmann::json axiom_report_to_json(const core::AxiomReport& rep);

} // namespace exlat::io
