#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace hardylab::verify {

struct PropertyResult {
    std::string name;
    int instances = 0;
    int failures = 0;
    double worst = 0.0;  // worst violation magnitude observed
};

struct Report {
    std::uint64_t seed = 0;
    bool full = false;
    std::vector<PropertyResult> rows;
    bool pass = true;
};

/// Runs the seeded property suite over every module invariant.
/// quick scale uses about 10 instances per property, full about 100
/// (fewer for the expensive distance scans).
Report run_all(std::uint64_t seed, bool full);

/// Fixed-format table; identical inputs produce identical bytes.
void write_report(const Report& rep, std::ostream& os);

}  // namespace hardylab::verify
