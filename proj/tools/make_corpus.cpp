// Writes the deterministic synthetic image corpus used by the tests and the
// example experiment configs.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "lrpc/image.hpp"
#include "lrpc/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generate the synthetic test image corpus"};
  std::string out_dir = ".";
  int count = 10, width = 768, height = 512;
  std::string format = "ppm";
  app.add_option("-o,--output", out_dir, "output directory (must exist)");
  app.add_option("-n,--count", count, "number of images");
  app.add_option("--width", width, "image width");
  app.add_option("--height", height, "image height");
  app.add_option("--format", format, "ppm or png");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (format != "ppm" && format != "png") {
    std::cerr << "error: format must be ppm or png\n";
    return 1;
  }

  try {
    for (int i = 0; i < count; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "synth%02d.%s", i, format.c_str());
      const std::string path = out_dir + "/" + name;
      lrpc::save_image(lrpc::make_test_image(i, width, height), path);
      std::cout << path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
