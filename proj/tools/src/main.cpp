#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
    return hotspot::app::run_cli(std::vector<std::string>(argv, argv + argc), std::cout);
}
