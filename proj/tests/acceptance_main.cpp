// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Exit code 0 iff all pass.

#include "exlat/verify.hpp"

#include <cstdio>

int main() {
    exlat::verify::Config cfg; // the documented defaults: p=2, q=5, N=5, bound 6, window 4
    auto results = exlat::verify::run_suite("all", cfg);
    int failed = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d (%.2fs): %s -- %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.seconds, r.name.c_str(), r.detail.c_str());
        if (!r.pass) ++failed;
    }
    std::printf("%d/%d criteria passed\n", (int)results.size() - failed, (int)results.size());
    return failed == 0 ? 0 : 1;
}
