#ifndef FHC_IO_CSV_HPP
#define FHC_IO_CSV_HPP

#include <optional>
#include <string>
#include <vector>

#include "fhc/pipeline/dataset.hpp"

namespace fhc {

// Feature tables: header `id,label,f0,f1,...`, floats with 17 significant
// digits so the round trip is value-exact for 64-bit floats.
void write_feature_csv(const std::string& path, const LabeledData& data);

// When `expected_labels` is given, rows with labels outside the set are
// rejected; otherwise the label set is derived (sorted) from the file.
LabeledData read_feature_csv(const std::string& path,
                             const std::optional<std::vector<std::string>>& expected_labels = {});

// Manifests: header `id,path,label,source`.
DatasetManifest read_manifest_csv(const std::string& path);
void write_manifest_csv(const std::string& path, const DatasetManifest& manifest);

}  // namespace fhc

#endif
