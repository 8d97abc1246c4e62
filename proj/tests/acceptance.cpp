#include "fbc/acceptance.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    std::string data = argc > 1 ? argv[1] : FBC_DATA_DIR;
    auto results = fbc::run_acceptance(data, 1, &std::cout);
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria pass")
              << std::endl;
    return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
