#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace imgprops {

enum class ErrorCode {
  UnsupportedFormat,
  CorruptStream,
  WrongColorSpace,
  TooSmall,
  NotSquare,
  SideNotPow2,
  InvalidArgument,
  BadMagic,
  DimMismatch,
  ChecksumFail,
  UnknownMetric,
  BadFlag,
  MissingInput,
  OutputUnwritable,
  WeightFileMissing,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace imgprops
