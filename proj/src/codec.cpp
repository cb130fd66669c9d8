// PNG/JPEG decoding and encoding on top of libpng and libjpeg.

#include <atomic>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>

#include <jpeglib.h>
#include <png.h>

#include "imgprops/error.hpp"
#include "imgprops/imgcore.hpp"

namespace imgprops {

namespace {

std::atomic<std::uint64_t> g_decode_count{0};

bool has_png_signature(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

bool has_jpeg_signature(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()) == 0) {
    throw Error(ErrorCode::CorruptStream, std::string("png header: ") + image.message);
  }
  // RGBA keeps the color samples untouched; alpha is stripped afterwards.
  image.format = PNG_FORMAT_RGBA;
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr) == 0) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::CorruptStream, "png data: " + msg);
  }
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t p = 0, n = static_cast<std::size_t>(width) * height; p < n; ++p) {
    rgb[3 * p + 0] = rgba[4 * p + 0];
    rgb[3 * p + 1] = rgba[4 * p + 1];
    rgb[3 * p + 2] = rgba[4 * p + 2];
  }
  return RasterImage::from_bytes(width, height, ColorSpace::RGB8, std::move(rgb));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_silent(j_common_ptr, int) {}

// Only trivially destructible locals live between setjmp and longjmp here;
// the output vector is owned by the caller.
bool decode_jpeg_raw(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& out,
                     int& width, int& height, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  jerr.base.emit_message = jpeg_silent;
  jerr.message[0] = '\0';
  if (setjmp(jerr.jump)) {
    std::strncpy(message, jerr.message, JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
    std::strncpy(message, "CMYK JPEG is not supported", JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  out.resize(static_cast<std::size_t>(width) * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

RasterImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> rgb;
  int width = 0;
  int height = 0;
  char message[JMSG_LENGTH_MAX] = {};
  if (!decode_jpeg_raw(bytes, rgb, width, height, message)) {
    throw Error(ErrorCode::CorruptStream, std::string("jpeg: ") + message);
  }
  return RasterImage::from_bytes(width, height, ColorSpace::RGB8, std::move(rgb));
}

bool encode_jpeg_raw(const std::uint8_t* pixels, int width, int height, int components,
                     int quality, unsigned char*& buffer, unsigned long& size) {
  jpeg_compress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  jerr.base.emit_message = jpeg_silent;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = components;
  cinfo.in_color_space = components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPROW>(pixels + static_cast<std::size_t>(cinfo.next_scanline) *
                                                  width * components);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

}  // namespace

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
  RasterImage img;
  if (has_png_signature(bytes)) {
    img = decode_png(bytes);
  } else if (has_jpeg_signature(bytes)) {
    img = decode_jpeg(bytes);
  } else {
    throw Error(ErrorCode::UnsupportedFormat, "stream is neither PNG nor JPEG");
  }
  g_decode_count.fetch_add(1, std::memory_order_relaxed);
  return img;
}

RasterImage decode_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_image(bytes);
}

std::uint64_t decode_count() noexcept { return g_decode_count.load(std::memory_order_relaxed); }

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  if (!is_integral(img.space())) {
    throw Error(ErrorCode::WrongColorSpace, "encode_png needs RGB8 or Gray8");
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.space() == ColorSpace::RGB8 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (png_image_write_to_memory(&image, nullptr, &size, 0, img.bytes().data(), 0, nullptr) == 0) {
    throw Error(ErrorCode::IoError, std::string("png encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (png_image_write_to_memory(&image, out.data(), &size, 0, img.bytes().data(), 0, nullptr) ==
      0) {
    throw Error(ErrorCode::IoError, std::string("png encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> encode_jpeg(const RasterImage& img, int quality) {
  if (!is_integral(img.space())) {
    throw Error(ErrorCode::WrongColorSpace, "encode_jpeg needs RGB8 or Gray8");
  }
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  const bool ok = encode_jpeg_raw(img.bytes().data(), img.width(), img.height(), img.channels(),
                                  quality, buffer, size);
  std::vector<std::uint8_t> out;
  if (ok) {
    out.assign(buffer, buffer + size);
  }
  std::free(buffer);
  if (!ok) {
    throw Error(ErrorCode::IoError, "jpeg encode failed");
  }
  return out;
}

}  // namespace imgprops
