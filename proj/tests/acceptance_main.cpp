#include <uowrelay/validate.hpp>

#include <cstdio>
#include <iostream>

int main() {
    using namespace uowrelay::validate;
    auto results = run_validation({}, &std::cerr);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %d %s: %s\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
        all = all && r.passed;
    }
    std::fflush(stdout);
    return all ? 0 : 1;
}
