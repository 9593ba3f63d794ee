#include <iostream>
#include <string>
#include <vector>

#include "nodalab/runner.hpp"

int main(int argc, char** argv) {
    return nodalab::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                            std::cerr);
}
