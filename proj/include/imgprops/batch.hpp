#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imgprops/cnn.hpp"
#include "imgprops/fourier.hpp"
#include "imgprops/imgcore.hpp"
#include "imgprops/pairwise.hpp"
#include "imgprops/raster.hpp"

namespace imgprops::batch {

inline constexpr std::string_view kVersion = "1.0.0";

/// Every metric identifier, in canonical column order.
const std::vector<std::string>& metric_names();
bool is_cnn_metric(std::string_view name);

enum class FailPolicy { SkipAndRecord, Abort };

struct MetricParams {
  /// Optional pre-processing applied to every decoded image before the
  /// metric-specific pipelines. Size and aspect ratio always report the
  /// decoded original.
  ResizePolicy resize = ResizePolicy::none();
  fourier::CookThreshold cook = fourier::CookThreshold::FourOverN;
  int redies_bins = 30;
  int hog_bins = 16;
  int phog_pixels = 100000;
  std::array<double, 3> level_weights{1.0, 1.0, 1.0};
  edges::DifferenceClasses eoe_classes = edges::DifferenceClasses::Folded;
  edges::PairWeighting eoe_weighting = edges::PairWeighting::StrengthProduct;
  bool hue_include_achromatic = true;
  int cnn_grid = 8;
  std::string weights_path;
};

struct RunConfig {
  std::vector<std::string> inputs;
  std::vector<std::string> metrics;
  MetricParams params;
  std::string output = "-";
  int workers = 1;
  FailPolicy fail_policy = FailPolicy::SkipAndRecord;
};

enum class Action { Run, ListMetrics, Version, Help };

struct CliRequest {
  Action action = Action::Run;
  RunConfig config;
  /// Usage text for Action::Help.
  std::string message;
};

/// Built-in weight file location (the bundled asset).
std::string default_weights_path();

/// Parses "none", "long:N", "max:N", "exact:WxH", each optionally followed by
/// ",nearest" or ",bilinear".
ResizePolicy parse_resize_policy(std::string_view text);
/// Comma-separated metric names or "all"; throws UnknownMetric listing the
/// valid names.
std::vector<std::string> parse_metric_list(std::string_view text);

/// Flat key=value configuration text ('#' starts a comment).
void apply_config_text(std::string_view text, RunConfig& config);

/// Defaults, then the --config file, then command-line flags.
CliRequest parse_command_line(int argc, const char* const* argv);

/// One image: resolved path plus the name written to the CSV.
struct InputFile {
  std::string path;
  std::string name;
};

/// Files, directories (non-recursive, .png/.jpg/.jpeg) and glob patterns,
/// sorted by name.
std::vector<InputFile> enumerate_inputs(const std::vector<std::string>& inputs);

struct ResultRow {
  std::string filename;
  std::vector<double> values;
  std::optional<std::string> error;
};

/// All selected metrics of one decoded image.
ResultRow compute_row(const RasterImage& img, const std::string& filename, const RunConfig& config,
                      const cnn::Conv1Weights* weights);

/// 6 significant digits, scientific from 1e6 up (and below 1e-4) without '+'
/// or leading exponent zeros; NaN renders as the empty string.
std::string format_value(double v);
std::string csv_escape(std::string_view field);

/// Header plus rows. An `error` column is appended only if some row failed.
void write_csv(std::ostream& out, const std::vector<std::string>& metrics,
               const std::vector<ResultRow>& rows);

struct BatchSummary {
  std::size_t rows_written = 0;
  std::size_t failures = 0;
  bool aborted = false;
};

BatchSummary run_batch(const RunConfig& config);

}  // namespace imgprops::batch
