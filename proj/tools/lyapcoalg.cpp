#include <iostream>
#include <string>
#include <vector>

#include "lyapcoalg/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return lyapcoalg::cli::run(args, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lyapcoalg::cli::kExitInputError;
    }
}
