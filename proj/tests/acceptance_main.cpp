// Acceptance suite runner: one line per criterion, nonzero exit on failure.
#include <cstdio>

#include "lpflab/acceptance.hpp"

int main() {
    auto results = lpflab::run_acceptance();
    bool all = true;
    for (const auto& r : results) {
        std::puts(lpflab::format_criterion(r).c_str());
        all &= r.pass;
    }
    std::puts(all ? "acceptance: ALL PASS" : "acceptance: FAILURES PRESENT");
    return all ? 0 : 1;
}
