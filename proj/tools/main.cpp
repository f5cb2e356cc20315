#include <string>
#include <vector>

#include "causalinfo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return causalinfo::cli::run(args);
}
