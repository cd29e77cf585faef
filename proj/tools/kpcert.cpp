#include <iostream>
#include <string>
#include <vector>

#include "kpcert/commands.hpp"

int main(int argc, char** argv) {
    return kpcert::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
