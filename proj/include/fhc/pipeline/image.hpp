#ifndef FHC_PIPELINE_IMAGE_HPP
#define FHC_PIPELINE_IMAGE_HPP

#include <cstdint>
#include <vector>

namespace fhc {

// 8-bit RGB image, row-major, interleaved channels.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;

  Image() = default;
  Image(int w, int h, uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<size_t>(w) * h * 3, fill) {}

  bool empty() const { return width <= 0 || height <= 0; }

  uint8_t& at(int x, int y, int c) {
    return pixels[(static_cast<size_t>(y) * width + x) * 3 + c];
  }
  uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<size_t>(y) * width + x) * 3 + c];
  }
};

}  // namespace fhc

#endif
