// Writes N random-phase PNG images with slopes cycling through a fixed list.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "imgprops/imgcore.hpp"
#include "imgprops/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate random-phase test images"};
  std::string out_dir;
  int count = 50;
  int side = 512;
  std::uint64_t seed = 1;
  app.add_option("dir", out_dir, "Output directory")->required();
  app.add_option("-n,--count", count, "Number of images");
  app.add_option("-s,--side", side, "Image side in pixels");
  app.add_option("--seed", seed, "Base seed");
  CLI11_PARSE(app, argc, argv);

  static constexpr double kAlphas[] = {0.8, 1.0, 1.2, 1.5, 2.0};
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const double alpha = kAlphas[i % 5];
    const auto img = imgprops::synth::random_phase_rgb8(side, alpha, seed + static_cast<std::uint64_t>(i));
    char name[64];
    std::snprintf(name, sizeof(name), "synth_%03d.png", i);
    const auto bytes = imgprops::encode_png(img);
    std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
      std::cerr << "cannot write " << name << '\n';
      return 1;
    }
  }
  return 0;
}
