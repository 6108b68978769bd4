// Writes the synthetic bay fixture (samples, probes, mask, config).

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coverfield/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic bay fixture"};
  std::string out_dir;
  std::uint64_t seed = 2010;
  std::size_t count = 300;
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--samples", count, "Number of survey samples");
  CLI11_PARSE(app, argc, argv);

  try {
    coverfield::write_bay_fixture(coverfield::make_bay_fixture(seed, count), out_dir);
  } catch (const std::exception& e) {
    std::cerr << "coverfield-bay-fixture: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
