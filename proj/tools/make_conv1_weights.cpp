// Writes the deterministic synthetic conv1 filter bank to a weight file.

#include <iostream>

#include "imgprops/cnn.hpp"
#include "imgprops/error.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_conv1_weights <out.atb>\n";
    return 1;
  }
  try {
    imgprops::cnn::save_conv1_weights(imgprops::cnn::synthetic_conv1_weights(), argv[1]);
  } catch (const imgprops::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
