#include <string>
#include <vector>

#include "rankagg_cli/commands.hpp"

int main(int argc, char** argv) {
    return rankagg::cli::run_cli(std::vector<std::string>(argv, argv + argc));
}
