#include <string>
#include <vector>

#include "nrs/cli.hpp"

int main(int argc, char** argv) {
    return nrs::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
