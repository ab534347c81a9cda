#pragma once

#include <string>
#include <vector>

namespace pqt::verify {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the full verification battery (nine criteria) and returns one result
/// per criterion.  Deterministic; used by both the acceptance binary and the
/// `verify` CLI command.
std::vector<CriterionResult> run_all();

/// Prints one pass/fail line per criterion; returns the number of failures.
int report(const std::vector<CriterionResult>& results);

}  // namespace pqt::verify
