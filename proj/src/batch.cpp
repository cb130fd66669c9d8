#include "imgprops/batch.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "imgprops/balance.hpp"
#include "imgprops/edges.hpp"
#include "imgprops/error.hpp"
#include "imgprops/fractal.hpp"
#include "imgprops/phog.hpp"
#include "imgprops/stats.hpp"

#ifndef IMGPROPS_DEFAULT_WEIGHTS
#define IMGPROPS_DEFAULT_WEIGHTS "conv1_synthetic.atb"
#endif

namespace imgprops::batch {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kMetricNames = {
    "image_size",       "aspect_ratio",     "r_mean",
    "r_std",            "g_mean",           "g_std",
    "b_mean",           "b_std",            "h_mean",
    "h_std",            "s_mean",           "s_std",
    "v_mean",           "v_std",            "lab_l_mean",
    "lab_l_std",        "lab_a_mean",       "lab_a_std",
    "lab_b_mean",       "lab_b_std",        "rms_contrast",
    "lightness_entropy", "color_entropy",   "slope_spehar",
    "slope_redies",     "sigma_redies",     "slope_mather",
    "fractal_dim_2d",   "fractal_dim_3d",   "phog_complexity",
    "phog_anisotropy",  "phog_self_similarity", "edge_density",
    "edge_density_sum", "eoe_1st",          "eoe_2nd",
    "mirror_symmetry",  "balance",          "dcm",
    "homogeneity",      "cnn_symmetry_lr",  "cnn_symmetry_ud",
    "cnn_symmetry_lrud", "cnn_self_similarity", "cnn_sparseness",
    "cnn_variability",
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    auto item = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorCode::BadFlag, std::string(what) + ": not an integer: '" + t + "'");
  }
  return v;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::BadFlag, std::string(what) + ": not a number: '" + t + "'");
  }

  std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  }

  void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto& p = cfg.params;
    if (key == "in") {
      cfg.inputs = split(value, ',');
    } else if (key == "metrics") {
      cfg.metrics = parse_metric_list(value);
    } else if (key == "out") {
      cfg.output = value;
    } else if (key == "workers") {
      cfg.workers = parse_int(value, key);
    } else if (key == "weights") {
      p.weights_path = value;
    } else if (key == "resize") {
      p.resize = parse_resize_policy(value);
    } else if (key == "fail_policy") {
      const auto v = lower(value);
      if (v == "skip") {
        cfg.fail_policy = FailPolicy::SkipAndRecord;
      } else if (v == "abort") {
        cfg.fail_policy = FailPolicy::Abort;
      } else {
        throw Error(ErrorCode::BadFlag, "fail_policy must be skip or abort");
      }
    } else if (key == "cook_threshold") {
      if (value == "4/n") {
        p.cook = fourier::CookThreshold::FourOverN;
      } else if (value == "n/4") {
        p.cook = fourier::CookThreshold::NOverFour;
      } else {
        throw Error(ErrorCode::BadFlag, "cook_threshold must be 4/n or n/4");
      }
    } else if (key == "redies_bins") {
      p.redies_bins = parse_int(value, key);
    } else if (key == "hog_bins") {
      p.hog_bins = parse_int(value, key);
    } else if (key == "phog_pixels") {
      p.phog_pixels = parse_int(value, key);
    } else if (key == "level_weights") {
      const auto parts = split(value, ',');
      if (parts.size() != 3) throw Error(ErrorCode::BadFlag, "level_weights needs 3 values");
      for (int i = 0; i < 3; ++i) p.level_weights[i] = parse_double(parts[i], key);
    } else if (key == "eoe_classes") {
      const auto v = lower(value);
      if (v == "folded") {
        p.eoe_classes = edges::DifferenceClasses::Folded;
      } else if (v == "unfolded") {
        p.eoe_classes = edges::DifferenceClasses::Unfolded;
      } else {
        throw Error(ErrorCode::BadFlag, "eoe_classes must be folded or unfolded");
      }
    } else if (key == "eoe_weighting") {
      const auto v = lower(value);
      if (v == "strength") {
        p.eoe_weighting = edges::PairWeighting::StrengthProduct;
      } else if (v == "count") {
        p.eoe_weighting = edges::PairWeighting::Unweighted;
      } else {
        throw Error(ErrorCode::BadFlag, "eoe_weighting must be strength or count");
      }
    } else if (key == "hue_achromatic") {
      const auto v = lower(value);
      if (v == "include") {
        p.hue_include_achromatic = true;
      } else if (v == "exclude") {
        p.hue_include_achromatic = false;
      } else {
        throw Error(ErrorCode::BadFlag, "hue_achromatic must be include or exclude");
      }
    } else if (key == "cnn_grid") {
      p.cnn_grid = parse_int(value, key);
    } else {
      throw Error(ErrorCode::BadFlag, "unknown config key '" + key + "'");
    }
  }

  void validate(const RunConfig& cfg) {
    const auto& p = cfg.params;
    if (cfg.workers < 1) throw Error(ErrorCode::BadFlag, "workers must be at least 1");
    if (p.cnn_grid < 2 || p.cnn_grid > 30) throw Error(ErrorCode::BadFlag, "cnn_grid must be in [2, 30]");
    if (p.hog_bins < 2) throw Error(ErrorCode::BadFlag, "hog_bins must be at least 2");
    if (p.redies_bins < 2) throw Error(ErrorCode::BadFlag, "redies_bins must be at least 2");
    if (p.phog_pixels < 0) throw Error(ErrorCode::BadFlag, "phog_pixels must be nonnegative");
    double wsum = 0.0;
    for (double w : p.level_weights) {
      if (w < 0.0) throw Error(ErrorCode::BadFlag, "level_weights must be nonnegative");
      wsum += w;
    }
    if (wsum <= 0.0) throw Error(ErrorCode::BadFlag, "level_weights must not all be zero");
  }

  bool has_image_extension(const fs::path& p) {
    const auto ext = lower(p.extension().string());
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
  }

  bool has_glob(std::string_view s) { return s.find_first_of("*?[") != std::string_view::npos; }

  // Lazily computed shared intermediates for one image; each group is derived
  // from the decoded original only.
  class RowContext {
   public:
    RowContext(const RasterImage& img, const RunConfig& cfg, const cnn::Conv1Weights* weights)
        : img_(img), cfg_(cfg), weights_(weights) {}

    double value(const std::string& name) {
      try {
        return compute(name);
      } catch (const Error&) {
        return kNaN;
      }
    }

   private:
    double compute(const std::string& name) {
      const auto& p = cfg_.params;
      if (name == "image_size") return stats::image_size(img_);
      if (name == "aspect_ratio") return stats::aspect_ratio(img_);
      const auto& work = working();
      if (auto stat = channel_stat(name)) return *stat;
      if (name == "rms_contrast") return stats::rms_contrast(work);
      if (name == "lightness_entropy") return stats::lightness_entropy(work);
      if (name == "color_entropy") return stats::color_entropy(work, {p.hue_include_achromatic});
      if (name == "slope_spehar") {
        fourier::SpeharOptions o;
        o.threshold = p.cook;
        return fourier::slope_spehar(work, o).slope;
      }
      if (name == "slope_redies" || name == "sigma_redies") {
        if (!redies_) {
          fourier::RediesOptions o;
          o.bins = p.redies_bins;
          redies_ = fourier::slope_redies(work, o);
        }
        return name == "slope_redies" ? redies_->slope : redies_->sigma;
      }
      if (name == "slope_mather") return fourier::slope_mather(work).slope;
      if (name == "fractal_dim_2d") return fractal::fractal_dim_2d(work);
      if (name == "fractal_dim_3d") return fractal::fractal_dim_3d(work);
      if (name == "phog_complexity") return phog::phog_complexity(gradient());
      if (name == "phog_anisotropy") return phog::phog_anisotropy(pyramid());
      if (name == "phog_self_similarity") return phog::phog_self_similarity(pyramid(), p.level_weights);
      if (name == "edge_density") return edges::edge_density(edge_field());
      if (name == "edge_density_sum") return edges::edge_density_sum(edge_field());
      if (name == "eoe_1st") return edges::eoe_first_order(edge_field());
      if (name == "eoe_2nd") {
        edges::PairOptions o;
        o.classes = p.eoe_classes;
        o.weighting = p.eoe_weighting;
        return edges::eoe_second_order(edge_field(), o);
      }
      if (name == "mirror_symmetry") return balance::mirror_symmetry(work);
      if (name == "balance") return balance::balance_score(mass());
      if (name == "dcm") return balance::dcm(mass());
      if (name == "homogeneity") return balance::homogeneity(work);
      if (name.starts_with("cnn_")) return cnn_value(name);
      throw Error(ErrorCode::UnknownMetric, "unknown metric '" + name + "'");
    }

    const RasterImage& working() {
      if (cfg_.params.resize.mode == ResizePolicy::Mode::None) return img_;
      if (!resized_) resized_ = resize(img_, cfg_.params.resize);
      return *resized_;
    }

    std::optional<double> channel_stat(const std::string& name) {
      static const std::unordered_map<std::string, std::pair<int, int>> kIndex = {
          {"r_mean", {0, 0}},     {"r_std", {0, 1}},     {"g_mean", {1, 0}},     {"g_std", {1, 1}},
          {"b_mean", {2, 0}},     {"b_std", {2, 1}},     {"h_mean", {3, 0}},     {"h_std", {3, 1}},
          {"s_mean", {4, 0}},     {"s_std", {4, 1}},     {"v_mean", {5, 0}},     {"v_std", {5, 1}},
          {"lab_l_mean", {6, 0}}, {"lab_l_std", {6, 1}}, {"lab_a_mean", {7, 0}}, {"lab_a_std", {7, 1}},
          {"lab_b_mean", {8, 0}}, {"lab_b_std", {8, 1}},
      };
      const auto it = kIndex.find(name);
      if (it == kIndex.end()) return std::nullopt;
      const int space = it->second.first / 3;
      const int channel = it->second.first % 3;
      auto& slot = channel_stats_[space];
      if (!slot) {
        static constexpr stats::StatsSpace kSpaces[3] = {stats::StatsSpace::RGB, stats::StatsSpace::HSV,
                                                        stats::StatsSpace::Lab};
        slot = stats::channel_stats(working(), kSpaces[space]);
      }
      return it->second.second == 0 ? slot->mean[channel] : slot->std[channel];
    }

    const phog::GradientImage& gradient() {
      if (!gradient_) {
        const auto& work = working();
        const int px = cfg_.params.phog_pixels;
        gradient_ = px > 0 ? phog::gradient_image(resize(work, ResizePolicy::area(work.width(), work.height(), px)))
                           : phog::gradient_image(work);
      }
      return *gradient_;
    }

    const phog::HogPyramid& pyramid() {
      if (!pyramid_) pyramid_ = phog::hog_pyramid(gradient(), cfg_.params.hog_bins);
      return *pyramid_;
    }

    const edges::EdgeField& edge_field() {
      if (!edges_) edges_ = edges::gabor_responses(working());
      return *edges_;
    }

    const Plane& mass() {
      if (!mass_) mass_ = balance::perceptual_mass(working());
      return *mass_;
    }

    double cnn_value(const std::string& name) {
      if (weights_ == nullptr) throw Error(ErrorCode::WeightFileMissing, "no conv1 weights loaded");
      if (!planes_) {
        planes_ = cnn::prepare_input(working());
        forward_ = cnn::conv1_forward(*planes_, *weights_);
      }
      if (name == "cnn_symmetry_lr" || name == "cnn_symmetry_ud" || name == "cnn_symmetry_lrud") {
        if (!symmetry_) symmetry_ = cnn::cnn_symmetry(*planes_, *forward_, *weights_);
        if (name == "cnn_symmetry_lr") return symmetry_->left_right;
        if (name == "cnn_symmetry_ud") return symmetry_->up_down;
        return symmetry_->combined;
      }
      if (name == "cnn_self_similarity") return cnn::cnn_self_similarity(*forward_);
      if (!variances_) variances_ = cnn::cnn_variances(*forward_, cfg_.params.cnn_grid);
      if (name == "cnn_sparseness") return variances_->sparseness;
      if (name == "cnn_variability") return variances_->variability;
      throw Error(ErrorCode::UnknownMetric, "unknown metric '" + name + "'");
    }

    const RasterImage& img_;
    const RunConfig& cfg_;
    const cnn::Conv1Weights* weights_;
    std::optional<RasterImage> resized_;
    std::array<std::optional<stats::ChannelStats>, 3> channel_stats_;
    std::optional<fourier::SlopeFit> redies_;
    std::optional<phog::GradientImage> gradient_;
    std::optional<phog::HogPyramid> pyramid_;
    std::optional<edges::EdgeField> edges_;
    std::optional<Plane> mass_;
    std::optional<std::array<Plane, 3>> planes_;
    std::optional<cnn::Conv1Responses> forward_;
    std::optional<cnn::CnnSymmetry> symmetry_;
    std::optional<cnn::CnnVariances> variances_;
  };

  }  // namespace

  const std::vector<std::string>& metric_names() { return kMetricNames; }

  bool is_cnn_metric(std::string_view name) { return name.starts_with("cnn_"); }

  std::string default_weights_path() {
    if (const char* env = std::getenv("IMGPROPS_WEIGHTS"); env != nullptr && *env != '\0') return env;
    return IMGPROPS_DEFAULT_WEIGHTS;
  }

  ResizePolicy parse_resize_policy(std::string_view text) {
    auto parts = split(text, ',');
    if (parts.empty()) throw Error(ErrorCode::BadFlag, "empty resize policy");
    ResizeFilter filter = ResizeFilter::Bilinear;
    if (parts.size() == 2) {
      const auto f = lower(parts[1]);
      if (f == "nearest") {
        filter = ResizeFilter::NearestNeighbor;
      } else if (f != "bilinear") {
        throw Error(ErrorCode::BadFlag, "resize filter must be bilinear or nearest");
      }
    } else if (parts.size() > 2) {
      throw Error(ErrorCode::BadFlag, "malformed resize policy '" + std::string(text) + "'");
    }
    const auto spec = lower(parts[0]);
    if (spec == "none") return ResizePolicy::none();
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::BadFlag, "malformed resize policy '" + spec + "'");
    const auto mode = spec.substr(0, colon);
    const auto arg = spec.substr(colon + 1);
    ResizePolicy policy;
    try {
    if (mode == "long") {
      policy = ResizePolicy::long_side_to(parse_int(arg, "resize"), filter);
    } else if (mode == "max") {
      policy = ResizePolicy::max_pixels(parse_int(arg, "resize"), filter);
    } else if (mode == "exact") {
      const auto x = arg.find('x');
      if (x == std::string::npos) throw Error(ErrorCode::BadFlag, "exact resize needs WxH");
      policy = ResizePolicy::exact(parse_int(arg.substr(0, x), "resize"), parse_int(arg.substr(x + 1), "resize"),
                                   filter);
    } else {
      throw Error(ErrorCode::BadFlag, "unknown resize mode '" + mode + "'");
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidArgument) throw;
    throw Error(ErrorCode::BadFlag, e.what());
  }
  if (policy.n < 0 || policy.width < 0 || policy.height < 0 ||
      (policy.mode != ResizePolicy::Mode::Exact && policy.n == 0) ||
      (policy.mode == ResizePolicy::Mode::Exact && (policy.width == 0 || policy.height == 0))) {
    throw Error(ErrorCode::BadFlag, "resize size must be positive");
  }
  return policy;
}

std::vector<std::string> parse_metric_list(std::string_view text) {
  const auto names = split(text, ',');
  if (names.size() == 1 && names[0] == "all") return kMetricNames;
  if (names.empty()) throw Error(ErrorCode::UnknownMetric, "empty metric list");
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (std::find(kMetricNames.begin(), kMetricNames.end(), n) == kMetricNames.end()) {
      std::string valid;
      for (const auto& m : kMetricNames) valid += (valid.empty() ? "" : ", ") + m;
      throw Error(ErrorCode::UnknownMetric, "unknown metric '" + n + "'; valid names: " + valid);
    }
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  return out;
}

void apply_config_text(std::string_view text, RunConfig& config) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::BadFlag, "config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_key(config, trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
}

CliRequest parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Computes objective image properties over image sets and writes one CSV row per image."};
  app.set_version_flag("--version", std::string(kVersion));

  std::vector<std::string> inputs;
  std::string metrics, out, config_path, weights, resize_text;
  int workers = 0;
  bool list = false;
  app.add_option("--in", inputs, "Input files, directories or glob patterns");
  app.add_option("--metrics", metrics, "Comma-separated metric names or 'all'");
  app.add_option("--out", out, "Output CSV path ('-' for stdout)");
  app.add_option("--workers", workers, "Number of images processed in parallel");
  app.add_option("--config", config_path, "Flat key=value configuration file");
  app.add_option("--weights", weights, "conv1 weight file");
  app.add_option("--resize", resize_text, "none | long:N | max:N | exact:WxH [,nearest|,bilinear]");
  app.add_flag("--list-metrics", list, "Print the metric names and exit");

  CliRequest req;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForVersion&) {
    req.action = Action::Version;
    return req;
  } catch (const CLI::Success&) {
    req.action = Action::Help;
    req.message = app.help();
    return req;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::BadFlag, e.what());
  }
  if (list) {
    req.action = Action::ListMetrics;
    return req;
  }

  RunConfig& cfg = req.config;
  cfg.metrics = kMetricNames;
  cfg.params.weights_path = default_weights_path();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw Error(ErrorCode::BadFlag, "cannot read config file " + config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    apply_config_text(ss.str(), cfg);
  }
  if (!inputs.empty()) cfg.inputs = inputs;
  if (!metrics.empty()) cfg.metrics = parse_metric_list(metrics);
  if (!out.empty()) cfg.output = out;
  if (app.count("--workers") > 0) cfg.workers = workers;
  if (!weights.empty()) cfg.params.weights_path = weights;
  if (!resize_text.empty()) cfg.params.resize = parse_resize_policy(resize_text);
  validate(cfg);
  if (cfg.inputs.empty()) throw Error(ErrorCode::MissingInput, "no input given (use --in)");
  return req;
}

std::vector<InputFile> enumerate_inputs(const std::vector<std::string>& inputs) {
  std::vector<InputFile> files;
  for (const auto& in : inputs) {
    const fs::path path(in);
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
          files.push_back({entry.path().string(), entry.path().filename().string()});
        }
      }
    } else if (has_glob(path.filename().string())) {
      const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
      const auto pattern = path.filename().string();
      if (fs::is_directory(dir, ec)) {
        for (const auto& entry : fs::directory_iterator(dir)) {
          const auto name = entry.path().filename().string();
          if (entry.is_regular_file() && fnmatch(pattern.c_str(), name.c_str(), 0) == 0) {
            files.push_back({entry.path().string(), name});
          }
        }
      }
    } else if (fs::exists(path, ec)) {
      files.push_back({path.string(), path.filename().string()});
    } else {
      throw Error(ErrorCode::MissingInput, "input not found: " + in);
    }
  }
  std::sort(files.begin(), files.end(), [](const InputFile& a, const InputFile& b) {
    return a.name != b.name ? a.name < b.name : a.path < b.path;
  });
  files.erase(std::unique(files.begin(), files.end(),
                          [](const InputFile& a, const InputFile& b) { return a.path == b.path; }),
              files.end());
  return files;
}

ResultRow compute_row(const RasterImage& img, const std::string& filename, const RunConfig& config,
                      const cnn::Conv1Weights* weights) {
  ResultRow row;
  row.filename = filename;
  RowContext ctx(img, config, weights);
  row.values.reserve(config.metrics.size());
  for (const auto& m : config.metrics) row.values.push_back(ctx.value(m));
  return row;
}

std::string format_value(double v) {
  if (std::isnan(v)) return {};
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  std::string s(buf);
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string mant = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  bool neg = false;
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
    neg = exp[0] == '-';
    exp.erase(0, 1);
  }
  exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
  return mant + "e" + (neg ? "-" : "") + exp;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const std::vector<std::string>& metrics, const std::vector<ResultRow>& rows) {
  const bool any_error = std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.error.has_value(); });
  out << "filename";
  for (const auto& m : metrics) out << ',' << m;
  if (any_error) out << ",error";
  out << '\n';
  for (const auto& r : rows) {
    out << csv_escape(r.filename);
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      out << ',';
      if (i < r.values.size()) out << format_value(r.values[i]);
    }
    if (any_error) out << ',' << csv_escape(r.error.value_or(""));
    out << '\n';
  }
}

BatchSummary run_batch(const RunConfig& config) {
  validate(config);
  const auto files = enumerate_inputs(config.inputs);

  std::unique_ptr<cnn::Conv1Weights> weights;
  if (std::any_of(config.metrics.begin(), config.metrics.end(), [](const std::string& m) { return is_cnn_metric(m); })) {
    weights = std::make_unique<cnn::Conv1Weights>(cnn::load_conv1_weights(config.params.weights_path));
  }

  // Probe writability up front without clobbering; the file is only
  // truncated once there is something to write.
  const bool to_stdout = config.output == "-";
  bool created = false;
  if (!to_stdout) {
    std::error_code ec;
    created = !fs::exists(config.output, ec);
    std::ofstream probe(config.output, std::ios::binary | std::ios::app);
    if (!probe) throw Error(ErrorCode::OutputUnwritable, "cannot write " + config.output);
  }

  std::vector<ResultRow> rows(files.size());
  const long n = static_cast<long>(files.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers)
  for (long i = 0; i < n; ++i) {
    const auto& f = files[static_cast<std::size_t>(i)];
    try {
      const RasterImage img = decode_file(f.path);
      rows[i] = compute_row(img, f.name, config, weights.get());
    } catch (const std::exception& e) {
      rows[i].filename = f.name;
      rows[i].values.assign(config.metrics.size(), kNaN);
      rows[i].error = e.what();
    }
  }

  BatchSummary summary;
  for (const auto& r : rows) summary.failures += r.error ? 1 : 0;
  if (summary.failures > 0 && config.fail_policy == FailPolicy::Abort) {
    summary.aborted = true;
    if (created) {
      std::error_code ec;
      fs::remove(config.output, ec);
    }
    return summary;
  }
  std::ofstream file;
  if (!to_stdout) {
    file.open(config.output, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::OutputUnwritable, "cannot write " + config.output);
  }
  std::ostream& out = to_stdout ? std::cout : file;
  write_csv(out, config.metrics, rows);
  out.flush();
  if (!out) throw Error(ErrorCode::OutputUnwritable, "write failed for " + config.output);
  summary.rows_written = rows.size();
  return summary;
}

}  // namespace imgprops::batch
