#ifndef FHC_IO_CHECKPOINT_HPP
#define FHC_IO_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fhc/nn/mlp.hpp"
#include "fhc/pipeline/pca.hpp"

namespace fhc {

// Versioned binary model bundle. Magic "FHC1", all integers and 64-bit
// floats little-endian. Loading rebuilds bit-identical predictions.
struct Checkpoint {
  static constexpr uint16_t kVersion = 1;

  std::vector<std::string> labels;
  std::vector<std::pair<std::string, int>> extractors;  // (name, output_dim)
  PcaModel pca;
  MlpModel mlp;
  uint64_t seed = 0;
  std::string rng_algorithm;
};

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);

// Validates magic, version, and dimension chaining; throws IoError with a
// distinct kind per failure.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace fhc

#endif
