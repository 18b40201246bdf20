#include "fhc/pipeline/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fhc/core/error.hpp"

namespace fhc {

AffineSample sample_augment_params(const AugmentParams& params, int width, int height,
                                   RandomStream& stream) {
  AffineSample s;
  s.rotation_deg = stream.next_uniform(-params.rotation_deg, params.rotation_deg);
  s.shift_x = stream.next_uniform(-params.shift_frac, params.shift_frac) * width;
  s.shift_y = stream.next_uniform(-params.shift_frac, params.shift_frac) * height;
  s.zoom = stream.next_uniform(params.zoom_lo, params.zoom_hi);
  return s;
}

Image apply_affine(const Image& image, const AffineSample& sample) {
  if (image.empty()) throw DataError("apply_affine: zero-sized image");
  const int w = image.width, h = image.height;
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  const double theta = sample.rotation_deg * std::numbers::pi / 180.0;
  // Inverse of A(p) = zoom * R(theta) (p - c) + c + t, evaluated per output pixel.
  const double cos_t = std::cos(-theta);
  const double sin_t = std::sin(-theta);
  const double inv_zoom = 1.0 / sample.zoom;

  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (x - cx - sample.shift_x) * inv_zoom;
      const double dy = (y - cy - sample.shift_y) * inv_zoom;
      double sx = dx * cos_t - dy * sin_t + cx;
      double sy = dx * sin_t + dy * cos_t + cy;
      sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
      sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
      const int x0 = static_cast<int>(sx);
      const int y0 = static_cast<int>(sy);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - x0;
      const double fy = sy - y0;
      for (int c = 0; c < 3; ++c) {
        const double v = (1 - fx) * (1 - fy) * image.at(x0, y0, c) +
                         fx * (1 - fy) * image.at(x1, y0, c) +
                         (1 - fx) * fy * image.at(x0, y1, c) +
                         fx * fy * image.at(x1, y1, c);
        out.at(x, y, c) = static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      }
    }
  }
  return out;
}

Image augment(const Image& image, const AugmentParams& params, RandomStream& stream) {
  return apply_affine(image, sample_augment_params(params, image.width, image.height, stream));
}

}  // namespace fhc
