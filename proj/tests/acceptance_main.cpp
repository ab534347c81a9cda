// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include "pqt/verify.hpp"

int main() {
    return pqt::verify::report(pqt::verify::run_all()) == 0 ? 0 : 1;
}
