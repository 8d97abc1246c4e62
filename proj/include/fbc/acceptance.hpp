#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace fbc {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0;
    std::string detail;
};

// Runs acceptance criteria 1-7 against the files in data_dir. With `out`, prints one line per
// criterion as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const std::string& data_dir, std::uint64_t seed = 1,
                                            std::ostream* out = nullptr);
std::string format_line(const CriterionResult& r);

}  // namespace fbc
