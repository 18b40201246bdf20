#ifndef FHC_PIPELINE_DATASET_HPP
#define FHC_PIPELINE_DATASET_HPP

#include <functional>
#include <string>
#include <vector>

#include "fhc/core/matrix.hpp"
#include "fhc/core/rng.hpp"
#include "fhc/pipeline/augment.hpp"
#include "fhc/pipeline/extractor.hpp"

namespace fhc {

struct ManifestEntry {
  std::string id;
  std::string path;
  std::string label;
  std::string source;  // one of: mobile, webcam, public, synthetic
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> label_set;  // sorted, unique
};

// Validates ids (unique), source tags, and derives the sorted label set.
DatasetManifest make_manifest(std::vector<ManifestEntry> entries);

// Feature rows with labels encoded as indices into label_names (sorted order).
struct LabeledData {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> label_names;
  std::vector<std::string> ids;
};

using ImageLoader = std::function<Image(const ManifestEntry&)>;

// Emits, per manifest entry, the fused-and-normalized feature row followed by
// `augment_copies` augmented rows (ids suffixed "#a1", "#a2", ...). Rows come
// out in manifest order, so the result is deterministic given (manifest
// order, stream seed).
LabeledData build_feature_table(const DatasetManifest& manifest, const Extractor& a,
                                const Extractor& b, int augment_copies,
                                const AugmentParams& params, RandomStream& stream,
                                const ImageLoader& loader);

}  // namespace fhc

#endif
