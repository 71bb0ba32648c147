#pragma once

#include "abvar/report.hpp"

namespace abvar {

struct CensusConfig {
    int g = 2;
    Int q = 3;
    std::vector<long> bounds;  // |a_i| <= bounds[i]; the last bound repeats
    int jobs = 1;
    std::string cache_dir;     // empty: no cache
    ReportConfig report;
};

/// Runs the ppav pipeline on every valid squarefree Weil polynomial in the
/// range. The summary depends only on the per-label documents, so a resumed
/// run yields the same summary as a fresh one.
Json run_census(const CensusConfig& cfg);

}  // namespace abvar
