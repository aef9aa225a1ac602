#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weil/weilrep.hpp"

namespace weil {

struct Config {
    RingCase rcase = RingCase::Symplectic;
    int p = 3;
    int level = 2;
    int m = 2;
    int form_type = 0; // 0 = skew hermitian, 1/2 = hermitian types
    int ideal_i = 1;
    std::string checks = "all"; // counts | abelian | nonabelian | all
    std::string arith = "exact"; // exact | float-shadow
    std::string cache_dir;
    std::string report_path;
    long long max_group_order = 1000000;
    bool timings = true;
};

struct CheckRecord {
    std::string id;
    std::string anchor;
    std::string expected;
    std::string computed;
    bool pass = false;
    bool skipped = false;
    long long millis = 0;
};

struct Report {
    Config cfg;
    int e = 0, j = 0;
    long long q = 0;
    std::vector<CheckRecord> checks;
    long long num_pass = 0, num_fail = 0, num_skip = 0;

    std::string to_json() const;
    void tally();
};

// Validates the configuration and executes the selected suites in dependency
// order (counts, then abelian, then nonabelian).
Report run_verify(const Config& cfg);

FormKind form_kind_of(const Config& cfg);
RingCase parse_case(const std::string& s);

} // namespace weil
