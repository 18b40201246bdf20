#ifndef FHC_IO_SYNTH_HPP
#define FHC_IO_SYNTH_HPP

#include <cstdint>

#include "fhc/pipeline/dataset.hpp"

namespace fhc {

// Gaussian class blobs: class means are `separation` times unit vectors
// (coordinate axes when dim >= classes, regular-simplex vertices when
// dim == classes - 1), samples add unit-variance noise per dimension.
// Labels are "class_00", "class_01", ... so sorted order matches indices.
LabeledData synth_dataset(int classes, int dim, int per_class, double separation,
                          uint64_t seed);

// Deterministic class-coded image: a class-specific base hue with a striped
// brightness pattern whose frequency encodes the class, plus per-sample
// jitter drawn from the stream. Gives the two toy extractor branches
// complementary signals (color vs spatial structure).
Image render_class_image(int class_index, int class_count, int size, RandomStream& stream);

}  // namespace fhc

#endif
