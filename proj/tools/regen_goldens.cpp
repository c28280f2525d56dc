#include <filesystem>
#include <iostream>

#include "odkl/golden.hpp"

// Rewrites the golden fixtures under the given directory (default
// tests/fixtures) from the matrix-form reference recursion.
int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "tests/fixtures";
    std::filesystem::create_directories(dir);
    for (const auto& cfg : odkl::golden::golden_configs()) {
        const auto trace = odkl::golden::generate(cfg);
        const auto path = dir / odkl::golden::fixture_filename(cfg);
        odkl::golden::write(trace, path);
        std::cout << "wrote " << path.string() << '\n';
    }
    return 0;
}
