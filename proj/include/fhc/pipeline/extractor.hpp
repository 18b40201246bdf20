#ifndef FHC_PIPELINE_EXTRACTOR_HPP
#define FHC_PIPELINE_EXTRACTOR_HPP

#include <functional>
#include <string>
#include <vector>

#include "fhc/pipeline/image.hpp"

namespace fhc {

using FeatureVector = std::vector<double>;

// A deterministic image -> embedding mapping. The two built-in branches are
// lightweight stand-ins for CNN backbones: each gives a genuinely different
// view of the image, so fusing them is meaningful.
struct Extractor {
  std::string name;
  int output_dim = 0;
  std::function<FeatureVector(const Image&)> fn;
};

// Branch A: 8x8 grid mean-pool of grayscale, then a fixed seeded random
// projection to output_dim.
Extractor make_gray_grid_extractor(int output_dim = 64);

// Branch B: 48-bin per-channel color histogram (144 values), then a fixed
// seeded random projection to output_dim.
Extractor make_color_hist_extractor(int output_dim = 64);

// Rebuild a built-in extractor from its recorded name and dimension.
Extractor extractor_by_name(const std::string& name, int output_dim);

// Grid mean-pool of grayscale used by branch A; exposed for testing.
std::vector<double> grid_mean_gray(const Image& image, int grid);

// Runs the extractor after validating the image, and validates the output
// length and finiteness against the extractor contract.
FeatureVector extract(const Image& image, const Extractor& extractor);

// Concatenation: fa occupies the prefix, fb the suffix.
FeatureVector fuse(const FeatureVector& fa, const FeatureVector& fb);

// Scales to unit L2 norm. Throws NumericError for the zero vector.
FeatureVector l2_normalize(const FeatureVector& v);

}  // namespace fhc

#endif
