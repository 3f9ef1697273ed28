#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cvb/error.hpp"

namespace cvb {

/// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 3;
  std::vector<std::uint8_t> pixels;

  Raster() = default;
  Raster(std::size_t w, std::size_t h, std::size_t c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c), pixels(w * h * c, fill) {
    if (c != 1 && c != 3) throw ArgumentError("raster must have 1 or 3 channels");
  }

  [[nodiscard]] std::uint8_t* at(std::size_t col, std::size_t row) { return &pixels[(row * width + col) * channels]; }
  [[nodiscard]] const std::uint8_t* at(std::size_t col, std::size_t row) const {
    return &pixels[(row * width + col) * channels];
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

namespace detail {

inline void skip_pnm_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline std::size_t read_pnm_uint(std::istream& in, const char* what) {
  skip_pnm_space(in);
  std::size_t v = 0;
  if (!(in >> v)) throw ParseError(std::string("PNM header: cannot read ") + what);
  return v;
}

}  // namespace detail

/// Reads P2, P3, P5 and P6 with maxval <= 255.
[[nodiscard]] inline Raster read_pnm(std::istream& in) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '3' && magic[1] != '5' && magic[1] != '6'))
    throw ParseError("not a P2/P3/P5/P6 image");
  const bool color = magic[1] == '3' || magic[1] == '6';
  const bool binary = magic[1] == '5' || magic[1] == '6';
  const auto w = detail::read_pnm_uint(in, "width");
  const auto h = detail::read_pnm_uint(in, "height");
  const auto maxval = detail::read_pnm_uint(in, "maxval");
  if (w == 0 || h == 0) throw ParseError("PNM header: zero image dimension");
  if (maxval == 0 || maxval > 255) throw ParseError("PNM header: only 8-bit images (maxval <= 255) are supported");

  Raster img(w, h, color ? 3 : 1);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (!std::isspace(in.get())) throw ParseError("PNM header: missing separator before pixel data");
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size()) throw ParseError("PNM data: truncated raster");
  } else {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      const auto v = detail::read_pnm_uint(in, "sample");
      if (v > maxval) throw ParseError("PNM data: sample exceeds maxval at index " + std::to_string(i));
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>((p * 255u + maxval / 2) / maxval);
  }
  return img;
}

inline void write_pnm(std::ostream& out, const Raster& img, bool binary = true) {
  const int magic = img.channels == 3 ? (binary ? 6 : 3) : (binary ? 5 : 2);
  out << 'P' << magic << '\n' << img.width << ' ' << img.height << "\n255\n";
  if (binary) {
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    return;
  }
  const std::size_t row = img.width * img.channels;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    out << static_cast<unsigned>(img.pixels[i]) << ((i + 1) % row == 0 ? '\n' : ' ');
  }
}

[[nodiscard]] inline Raster read_pnm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return read_pnm(in);
}

inline void write_pnm_file(const std::string& path, const Raster& img, bool binary = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  write_pnm(out, img, binary);
  if (!out) throw std::ios_base::failure("error writing " + path);
}

}  // namespace cvb
