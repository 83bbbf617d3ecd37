// Writes the desk-scale fixture (gazetteers, tweet corpora, catalog and a
// pipeline.conf) into a directory.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quakeloc/error.hpp"
#include "quakeloc/fixtures.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the desk-scale quakeloc fixture"};
  std::string dir;
  std::uint64_t seed = 7;
  app.add_option("dir", dir, "output directory")->required();
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);
  try {
    auto fx = quakeloc::fixtures::write_desk_fixture(dir, seed);
    std::cout << fx.config.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "quakeloc-fixture: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
