#include "qkdimg/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace fs = std::filesystem;

namespace {

bool is_pnm_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string magic() {
    if (bytes_.size() < 2) throw FormatError("file too short for a PNM magic number", 0);
    pos_ = 2;
    return {static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
  }

  // Whitespace and '#' comments are allowed before each header field.
  std::size_t number(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      if (pos_ - start >= 9) throw FormatError(std::string(field) + " has too many digits", start);
      value = value * 10 + (bytes_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) {
      throw FormatError(std::string("expected ") + field, pos_);
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the payload.
  void end_of_header() {
    if (pos_ >= bytes_.size() || !is_pnm_space(bytes_[pos_])) {
      throw FormatError("expected a single whitespace byte after maxval", pos_);
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_pnm_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct PnmHeader {
  int channels = 1;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t maxval = 0;
  std::size_t payload_offset = 0;
};

PnmHeader parse_header(std::span<const std::uint8_t> bytes, bool allow_color) {
  HeaderReader reader(bytes);
  const std::string magic = reader.magic();
  PnmHeader h;
  if (magic == "P5") {
    h.channels = 1;
  } else if (magic == "P6" && allow_color) {
    h.channels = 3;
  } else {
    throw FormatError(allow_color ? "unsupported magic '" + magic + "' (expected P5 or P6)"
                                  : "unsupported magic '" + magic + "' (expected P5)",
                      0);
  }
  const std::size_t width_at = reader.position();
  h.width = reader.number("width");
  const std::size_t height_at = reader.position();
  h.height = reader.number("height");
  const std::size_t maxval_at = reader.position();
  h.maxval = reader.number("maxval");
  if (h.width == 0 || h.width > kMaxImageSide) {
    throw FormatError("width " + std::to_string(h.width) + " outside 1..65536", width_at);
  }
  if (h.height == 0 || h.height > kMaxImageSide) {
    throw FormatError("height " + std::to_string(h.height) + " outside 1..65536", height_at);
  }
  if (h.maxval == 0 || h.maxval > 65535) {
    throw FormatError("maxval " + std::to_string(h.maxval) + " outside 1..65535", maxval_at);
  }
  reader.end_of_header();
  h.payload_offset = reader.position();
  return h;
}

std::string lower_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

bool is_supported_extension(const fs::path& p) {
  const std::string ext = lower_extension(p);
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  const PnmHeader h = parse_header(bytes, /*allow_color=*/false);
  if (h.maxval > 255) {
    throw FormatError("maxval " + std::to_string(h.maxval) + " exceeds 255; 16-bit PGM is not supported",
                      h.payload_offset - 1);
  }
  const std::size_t count = h.width * h.height;
  if (bytes.size() - h.payload_offset < count) {
    throw FormatError("truncated payload: " + std::to_string(bytes.size() - h.payload_offset) +
                          " of " + std::to_string(count) + " pixel bytes present",
                      bytes.size());
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(h.payload_offset),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(h.payload_offset + count));
  for (std::size_t i = 0; i < count; ++i) {
    if (pixels[i] > h.maxval) {
      throw FormatError("pixel value " + std::to_string(pixels[i]) + " exceeds maxval " +
                            std::to_string(h.maxval),
                        h.payload_offset + i);
    }
  }
  return GrayImage(h.width, h.height, std::move(pixels));
}

std::vector<std::uint8_t> write_pgm(const GrayImage& image) {
  const std::string header =
      "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + image.size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), image.pixels().begin(), image.pixels().end());
  return out;
}

Raster read_pnm_raster(std::span<const std::uint8_t> bytes) {
  const PnmHeader h = parse_header(bytes, /*allow_color=*/true);
  Raster r;
  r.width = h.width;
  r.height = h.height;
  r.channels = h.channels;
  r.bit_depth = h.maxval > 255 ? 16 : 8;
  const std::size_t count = h.width * h.height * static_cast<std::size_t>(h.channels) *
                            (r.bit_depth == 16 ? 2 : 1);
  if (bytes.size() - h.payload_offset < count) {
    throw FormatError("truncated payload: " + std::to_string(bytes.size() - h.payload_offset) +
                          " of " + std::to_string(count) + " sample bytes present",
                      bytes.size());
  }
  r.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(h.payload_offset),
                   bytes.begin() + static_cast<std::ptrdiff_t>(h.payload_offset + count));
  return r;
}

GrayImage ingest_to_gray(const Raster& raster) {
  if (raster.bit_depth != 8) {
    throw FormatError("unsupported bit depth " + std::to_string(raster.bit_depth) +
                          " (only 8-bit channels are accepted)",
                      0);
  }
  if (raster.channels != 1 && raster.channels != 3) {
    throw FormatError("unsupported channel count " + std::to_string(raster.channels), 0);
  }
  const std::size_t n = raster.width * raster.height;
  if (raster.samples.size() != n * static_cast<std::size_t>(raster.channels)) {
    throw ShapeError("raster sample count does not match its dimensions");
  }
  if (raster.channels == 1) return GrayImage(raster.width, raster.height, raster.samples);

  // Integer form of round-half-up(0.299 R + 0.587 G + 0.114 B): the weighted
  // sum is exact in thousandths, so adding 500 and dividing rounds halves up.
  std::vector<std::uint8_t> gray(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned r = raster.samples[3 * i];
    const unsigned g = raster.samples[3 * i + 1];
    const unsigned b = raster.samples[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
  }
  return GrayImage(raster.width, raster.height, std::move(gray));
}

std::string_view to_string(SourceFormat format) {
  return format == SourceFormat::pgm ? "pgm" : "converted";
}

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return bytes;
}

LoadedImage load_gray_image(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    return {read_pgm(bytes), SourceFormat::pgm};
  }
  return {ingest_to_gray(read_pnm_raster(bytes)), SourceFormat::converted};
}

DatasetScan scan_dataset(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw PathError("dataset directory '" + root.string() + "' does not exist or is not a directory");
  }

  std::vector<fs::path> candidates;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw PathError("cannot read dataset directory '" + root.string() + "': " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file(ec) && is_supported_extension(it->path())) candidates.push_back(it->path());
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

  DatasetScan scan;
  for (const auto& path : candidates) {
    try {
      const LoadedImage loaded = load_gray_image(path);
      scan.records.push_back({path, loaded.image.width(), loaded.image.height(), loaded.source_format});
    } catch (const Error& e) {
      scan.warnings.push_back(path.generic_string() + ": " + e.what());
    }
  }
  return scan;
}

}  // namespace qkdimg
