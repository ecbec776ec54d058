#pragma once

#include <string>
#include <vector>

namespace hdet::acceptance {

struct Outcome {
    int id = 0;
    std::string name;
    bool pass = false;
    /// Worst measured residual against the pinned tolerance.
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

constexpr int kCriteria = 15;

const char* criterion_name(int id);

/// Runs one criterion. Library errors are caught and reported as a failure.
Outcome run(int id);

/// "criterion 3 tracy-widom-representation: PASS measured=... tol=... (detail)"
std::string summary_line(const Outcome& o);

} // namespace hdet::acceptance
