// Batch image-property extraction.
//
// Exit codes: 0 success, 1 configuration error, 2 output error,
// 3 aborted after an image failed (fail_policy=abort).

#include <iostream>

#include "imgprops/batch.hpp"
#include "imgprops/error.hpp"

int main(int argc, char** argv) {
  using namespace imgprops;
  batch::CliRequest req;
  try {
    req = batch::parse_command_line(argc, argv);
  } catch (const Error& e) {
    std::cerr << "imgprops: " << e.what() << '\n';
    return 1;
  }
  if (req.action == batch::Action::Help) {
    std::cout << req.message;
    return 0;
  }
  if (req.action == batch::Action::Version) {
    std::cout << batch::kVersion << '\n';
    return 0;
  }
  if (req.action == batch::Action::ListMetrics) {
    for (const auto& m : batch::metric_names()) std::cout << m << '\n';
    return 0;
  }
  try {
    const auto summary = batch::run_batch(req.config);
    if (summary.aborted) {
      std::cerr << "imgprops: aborted, " << summary.failures << " image(s) failed\n";
      return 3;
    }
    if (summary.failures > 0) {
      std::cerr << "imgprops: " << summary.failures << " image(s) failed and were recorded\n";
    }
  } catch (const Error& e) {
    std::cerr << "imgprops: " << e.what() << '\n';
    return e.code() == ErrorCode::OutputUnwritable ? 2 : 1;
  }
  return 0;
}
