// validation.hpp - the acceptance checks, shared by the acceptance binary and `nmq validate`

#pragma once

#include <string>
#include <vector>

namespace nmq {

struct ValidationConfig {
    double x{0.05};
    double gamma0_over_omega0{0.01};
    std::size_t n_modes{81};
    double band{0.4};  // units of omega0
    unsigned mmax{2};
    unsigned threads{0};
    bool skip_doubling{false};  // drop the n_modes doubling run (the slowest check)
};

struct CheckResult {
    int criterion{0};
    std::string name;
    double expected{0.0};
    double actual{0.0};
    double tolerance{0.0};
    bool pass{false};
    bool skipped{false};
    std::string detail;  // comparison rule and context; the skip reason when skipped
};

std::vector<CheckResult> run_acceptance(const ValidationConfig& cfg, std::vector<std::string>& warnings);

// Criterion number -> short title, for one-line summaries.
std::string criterion_title(int criterion);

}  // namespace nmq
