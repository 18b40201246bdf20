#ifndef FHC_IO_PPM_HPP
#define FHC_IO_PPM_HPP

#include <string>

#include "fhc/pipeline/image.hpp"

namespace fhc {

// Binary PPM ("P6", maxval 255). The reader accepts '#' comments in the
// header; the writer emits a minimal header.
Image read_ppm(const std::string& path);
void write_ppm(const std::string& path, const Image& image);

}  // namespace fhc

#endif
