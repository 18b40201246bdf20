#ifndef FHC_PIPELINE_AUGMENT_HPP
#define FHC_PIPELINE_AUGMENT_HPP

#include "fhc/core/rng.hpp"
#include "fhc/pipeline/image.hpp"

namespace fhc {

// Augmentation ranges: rotation in [-rotation_deg, +rotation_deg] degrees,
// translation in [-shift_frac, +shift_frac] of each dimension, zoom factor
// in [zoom_lo, zoom_hi].
struct AugmentParams {
  double rotation_deg = 30.0;
  double shift_frac = 0.10;
  double zoom_lo = 0.8;
  double zoom_hi = 1.2;
};

struct AffineSample {
  double rotation_deg = 0.0;
  double shift_x = 0.0;  // pixels
  double shift_y = 0.0;  // pixels
  double zoom = 1.0;
};

// Draws rotation, shift_x, shift_y, zoom in that order from the stream.
AffineSample sample_augment_params(const AugmentParams& params, int width, int height,
                                   RandomStream& stream);

// Rotation about the center, translation, and central zoom composed as a
// single affine map; bilinear sampling with nearest-edge fill. The identity
// sample reproduces the input bitwise.
Image apply_affine(const Image& image, const AffineSample& sample);

Image augment(const Image& image, const AugmentParams& params, RandomStream& stream);

}  // namespace fhc

#endif
