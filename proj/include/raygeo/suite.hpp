#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace raygeo {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool ok = false;
    std::string detail;
    double seconds = 0.0;
};

/// Run the full verification suite. When `progress` is given, one
/// "[PASS]/[FAIL] <id>. <name> - <detail>" line is printed per criterion.
std::vector<CriterionResult> run_suite(std::ostream* progress = nullptr);

bool suite_ok(const std::vector<CriterionResult>& results);

}  // namespace raygeo
