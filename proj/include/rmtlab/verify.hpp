#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rmtlab {

struct SuiteResult {
    std::string name;
    bool pass;
    std::string detail;
};

// "all" or one of: cosine, torus-shift, s1, interlacing, paley-zygmund,
// spread, levy-oracle, f1f2, hanson-wright, decoupling, compare-rd,
// box-coverage, box-rlogd, ensembles. Empty result means the name is unknown.
std::vector<SuiteResult> run_verify_suites(const std::string& which, std::uint64_t seed);

} // namespace rmtlab
