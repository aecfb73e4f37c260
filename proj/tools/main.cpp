#include <vector>

#include "misinfo/cli.hpp"

int main(int argc, char** argv) {
    return misinfo::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
