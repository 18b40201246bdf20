#include "fhc/io/ppm.hpp"

#include <fstream>

#include "fhc/core/error.hpp"

namespace fhc {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

}  // namespace

Image read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image file '" + path + "'");
  if (next_token(in) != "P6")
    throw IoError(IoErrorKind::bad_magic, "'" + path + "' is not a binary PPM (P6)");
  Image img;
  try {
    img.width = std::stoi(next_token(in));
    img.height = std::stoi(next_token(in));
    const int maxval = std::stoi(next_token(in));
    if (maxval != 255)
      throw IoError(IoErrorKind::malformed, "'" + path + "' maxval must be 255");
  } catch (const std::logic_error&) {
    throw IoError(IoErrorKind::malformed, "'" + path + "' has a malformed PPM header");
  }
  if (img.width <= 0 || img.height <= 0)
    throw IoError(IoErrorKind::malformed, "'" + path + "' has non-positive dimensions");
  img.pixels.resize(static_cast<size_t>(img.width) * img.height * 3);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<size_t>(in.gcount()) != img.pixels.size())
    throw IoError(IoErrorKind::truncated, "'" + path + "' ends before the pixel data does");
  return img;
}

void write_ppm(const std::string& path, const Image& image) {
  if (image.empty()) throw DataError("write_ppm: refusing to write an empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write image file '" + path + "'");
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw DataError("failed while writing '" + path + "'");
}

}  // namespace fhc
