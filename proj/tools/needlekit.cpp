#include "needle/cli.hpp"

int main(int argc, char** argv) {
    return needle::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
