// Acceptance runner: one pass/fail line per criterion, non-zero exit on any
// failure. The same checks back the CLI's `suite` subcommand.

#include <iostream>

#include "raygeo/suite.hpp"

int main() {
    const auto results = raygeo::run_suite(&std::cout);
    int failures = 0;
    for (const auto& r : results) {
        if (!r.ok) ++failures;
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all " << results.size() << " criteria passed" << std::endl;
    return 0;
}
