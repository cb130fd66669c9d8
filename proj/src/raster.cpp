#include "imgprops/raster.hpp"

#include <string>

#include "imgprops/error.hpp"

namespace imgprops {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "image dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

std::size_t sample_count(int width, int height, ColorSpace space) {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
         static_cast<std::size_t>(channel_count(space));
}

}  // namespace

RasterImage::RasterImage(int width, int height, ColorSpace space)
    : width_(width), height_(height), space_(space) {
  check_dims(width, height);
  if (is_integral(space)) {
    bytes_.assign(sample_count(width, height, space), 0);
  } else {
    reals_.assign(sample_count(width, height, space), 0.0);
  }
}

RasterImage RasterImage::from_bytes(int width, int height, ColorSpace space,
                                    std::vector<std::uint8_t> data) {
  check_dims(width, height);
  if (!is_integral(space)) {
    throw Error(ErrorCode::WrongColorSpace, "byte storage requires RGB8 or Gray8");
  }
  if (data.size() != sample_count(width, height, space)) {
    throw Error(ErrorCode::InvalidArgument, "pixel buffer length does not match dimensions");
  }
  RasterImage img;
  img.width_ = width;
  img.height_ = height;
  img.space_ = space;
  img.bytes_ = std::move(data);
  return img;
}

RasterImage RasterImage::from_reals(int width, int height, ColorSpace space,
                                    std::vector<double> data) {
  check_dims(width, height);
  if (is_integral(space)) {
    throw Error(ErrorCode::WrongColorSpace, "real storage requires GrayF, Lab or HSV");
  }
  if (data.size() != sample_count(width, height, space)) {
    throw Error(ErrorCode::InvalidArgument, "pixel buffer length does not match dimensions");
  }
  RasterImage img;
  img.width_ = width;
  img.height_ = height;
  img.space_ = space;
  img.reals_ = std::move(data);
  return img;
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptStream: return "CorruptStream";
    case ErrorCode::WrongColorSpace: return "WrongColorSpace";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::SideNotPow2: return "SideNotPow2";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ChecksumFail: return "ChecksumFail";
    case ErrorCode::UnknownMetric: return "UnknownMetric";
    case ErrorCode::BadFlag: return "BadFlag";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::OutputUnwritable: return "OutputUnwritable";
    case ErrorCode::WeightFileMissing: return "WeightFileMissing";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace imgprops
