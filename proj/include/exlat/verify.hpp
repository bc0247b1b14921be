#pragma once

// The verification suites: one entry per acceptance criterion, shared by the
// CLI (`exact-lattice verify`) and the acceptance test binary. Every check
// pins its tolerances and expected values here.

#include <cstdint>
#include <string>
#include <vector>

namespace exlat::verify {

struct Config {
    int64_t p = 2;
    int64_t q = 5;
    int N = 5;
    int dim_bound = 6;
    int window = 4;
    uint64_t seed = 0;
    int jobs = 1;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

CriterionResult criterion1_a3_lattice(const Config&);
CriterionResult criterion2_dvr_ext_oracle(const Config&);
CriterionResult criterion3_radext_identity(const Config&);
CriterionResult criterion4_gap_criterion(const Config&);
CriterionResult criterion5_topology_axioms(const Config&);
CriterionResult criterion6_order_reversal(const Config&);
CriterionResult criterion7_kronecker_tables(const Config&);
CriterionResult criterion8_typeii_staircase(const Config&);
CriterionResult criterion9_torsion_identity(const Config&);
CriterionResult criterion10_axiom_soundness(const Config&);

// suites: dvr {2,3,4}, lattice {5,6,10}, enomoto {1}, kronecker {7,8},
// functor {9}, all {1..10}
std::vector<CriterionResult> run_suite(const std::string& suite, const Config& cfg);

} // namespace exlat::verify
