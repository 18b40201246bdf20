#include "fhc/pipeline/dataset.hpp"

#include <algorithm>
#include <set>

#include "fhc/core/error.hpp"

namespace fhc {

DatasetManifest make_manifest(std::vector<ManifestEntry> entries) {
  static const std::set<std::string> kSources = {"mobile", "webcam", "public", "synthetic"};
  std::set<std::string> ids, labels;
  for (const auto& e : entries) {
    if (!ids.insert(e.id).second)
      throw DataError("manifest: duplicate sample id '" + e.id + "'");
    if (kSources.find(e.source) == kSources.end())
      throw DataError("manifest: unknown source tag '" + e.source + "' for id '" + e.id + "'");
    labels.insert(e.label);
  }
  DatasetManifest m;
  m.entries = std::move(entries);
  m.label_set.assign(labels.begin(), labels.end());
  return m;
}

LabeledData build_feature_table(const DatasetManifest& manifest, const Extractor& a,
                                const Extractor& b, int augment_copies,
                                const AugmentParams& params, RandomStream& stream,
                                const ImageLoader& loader) {
  if (augment_copies < 0) throw DataError("build_feature_table: augment_copies must be >= 0");
  LabeledData out;
  out.label_names = manifest.label_set;

  const int fused_dim = a.output_dim + b.output_dim;
  const size_t rows = manifest.entries.size() * (1 + augment_copies);
  out.features = Matrix(static_cast<int>(rows), fused_dim);
  out.labels.reserve(rows);
  out.ids.reserve(rows);

  int row = 0;
  for (const auto& entry : manifest.entries) {
    const auto it =
        std::lower_bound(out.label_names.begin(), out.label_names.end(), entry.label);
    if (it == out.label_names.end() || *it != entry.label)
      throw DataError("build_feature_table: label '" + entry.label +
                      "' of sample '" + entry.id + "' is outside the declared label set");
    const int label = static_cast<int>(it - out.label_names.begin());

    Image img = loader(entry);
    auto emit = [&](const Image& im, const std::string& id) {
      FeatureVector fused = l2_normalize(fuse(extract(im, a), extract(im, b)));
      std::copy(fused.begin(), fused.end(), out.features.row(row).begin());
      out.labels.push_back(label);
      out.ids.push_back(id);
      ++row;
    };
    emit(img, entry.id);
    for (int copy = 1; copy <= augment_copies; ++copy)
      emit(augment(img, params, stream), entry.id + "#a" + std::to_string(copy));
  }
  return out;
}

}  // namespace fhc
