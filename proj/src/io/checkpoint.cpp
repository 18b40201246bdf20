#include "fhc/io/checkpoint.hpp"

#include <bit>
#include <fstream>

#include "fhc/core/error.hpp"

namespace fhc {

namespace {

constexpr char kMagic[4] = {'F', 'H', 'C', '1'};

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw DataError("cannot write checkpoint '" + path + "'");
  }
  void bytes(const void* data, size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void u16(uint16_t v) { uint_le(v, 2); }
  void u32(uint32_t v) { uint_le(v, 4); }
  void u64(uint64_t v) { uint_le(v, 8); }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void f64s(const std::vector<double>& v) {
    u32(static_cast<uint32_t>(v.size()));
    for (double x : v) f64(x);
  }
  void close() {
    out_.flush();
    if (!out_) throw DataError("failed while writing '" + path_ + "'");
  }

 private:
  void uint_le(uint64_t v, int bytes_count) {
    char buf[8];
    for (int i = 0; i < bytes_count; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    bytes(buf, static_cast<size_t>(bytes_count));
  }
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw DataError("cannot open checkpoint '" + path + "'");
  }
  void bytes(void* data, size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n)
      throw IoError(IoErrorKind::truncated,
                    "'" + path_ + "': unexpected end of checkpoint data");
  }
  uint16_t u16() { return static_cast<uint16_t>(uint_le(2)); }
  uint32_t u32() { return static_cast<uint32_t>(uint_le(4)); }
  uint64_t u64() { return uint_le(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const uint32_t n = u32();
    if (n > (1u << 20))
      throw IoError(IoErrorKind::malformed, "'" + path_ + "': implausible string length");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  std::vector<double> f64s(uint32_t expected = UINT32_MAX) {
    const uint32_t n = u32();
    if (expected != UINT32_MAX && n != expected)
      throw IoError(IoErrorKind::dim_chain, "'" + path_ + "': vector length " +
                                                std::to_string(n) + " does not chain (expected " +
                                                std::to_string(expected) + ")");
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }

 private:
  uint64_t uint_le(int bytes_count) {
    unsigned char buf[8];
    bytes(buf, static_cast<size_t>(bytes_count));
    uint64_t v = 0;
    for (int i = 0; i < bytes_count; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
    return v;
  }
  std::ifstream in_;
  std::string path_;
};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  Writer w(path);
  w.bytes(kMagic, 4);
  w.u16(Checkpoint::kVersion);
  w.str(checkpoint.rng_algorithm);
  w.u64(checkpoint.seed);

  w.u32(static_cast<uint32_t>(checkpoint.labels.size()));
  for (const auto& l : checkpoint.labels) w.str(l);

  w.u32(static_cast<uint32_t>(checkpoint.extractors.size()));
  for (const auto& [name, dim] : checkpoint.extractors) {
    w.str(name);
    w.u32(static_cast<uint32_t>(dim));
  }

  const auto& pca = checkpoint.pca;
  w.u32(static_cast<uint32_t>(pca.mean.size()));
  w.u32(static_cast<uint32_t>(pca.k));
  w.f64(pca.threshold);
  w.f64s(pca.mean);
  w.f64s(pca.eigenvalues);
  w.f64s(pca.basis.data);

  const auto& mlp = checkpoint.mlp;
  w.u32(static_cast<uint32_t>(mlp.class_count));
  w.u32(static_cast<uint32_t>(mlp.spec.size()));
  for (const auto& ls : mlp.spec) {
    w.u32(static_cast<uint32_t>(ls.in_dim));
    w.u32(static_cast<uint32_t>(ls.out_dim));
    w.u16(ls.activation == Activation::softmax ? 1 : 0);
    w.f64(ls.dropout_rate);
    w.u16(ls.batch_norm ? 1 : 0);
  }
  for (const auto& layer : mlp.layers) {
    w.f64s(layer.weights.data);
    w.f64s(layer.bias);
    if (!layer.gamma.empty()) {
      w.f64s(layer.gamma);
      w.f64s(layer.beta);
      w.f64s(layer.running_mean);
      w.f64s(layer.running_var);
    }
  }
  w.close();
}

Checkpoint load_checkpoint(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  for (int i = 0; i < 4; ++i)
    if (magic[i] != kMagic[i])
      throw IoError(IoErrorKind::bad_magic, "'" + path + "': bad magic, not a checkpoint");
  const uint16_t version = r.u16();
  if (version != Checkpoint::kVersion)
    throw IoError(IoErrorKind::version_mismatch,
                  "'" + path + "': checkpoint version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(Checkpoint::kVersion) + ")");

  Checkpoint c;
  c.rng_algorithm = r.str();
  c.seed = r.u64();

  const uint32_t label_count = r.u32();
  for (uint32_t i = 0; i < label_count; ++i) c.labels.push_back(r.str());

  const uint32_t extractor_count = r.u32();
  for (uint32_t i = 0; i < extractor_count; ++i) {
    std::string name = r.str();
    const uint32_t dim = r.u32();
    c.extractors.emplace_back(std::move(name), static_cast<int>(dim));
  }

  const uint32_t dim = r.u32();
  const uint32_t k = r.u32();
  c.pca.threshold = r.f64();
  c.pca.k = static_cast<int>(k);
  c.pca.mean = r.f64s(dim);
  c.pca.eigenvalues = r.f64s();
  c.pca.basis = Matrix(static_cast<int>(dim), static_cast<int>(k));
  c.pca.basis.data = r.f64s(dim * k);
  if (k == 0 || k > dim)
    throw IoError(IoErrorKind::dim_chain, "'" + path + "': pca component count out of range");

  c.mlp.class_count = static_cast<int>(r.u32());
  const uint32_t layer_count = r.u32();
  for (uint32_t i = 0; i < layer_count; ++i) {
    LayerSpec ls;
    ls.in_dim = static_cast<int>(r.u32());
    ls.out_dim = static_cast<int>(r.u32());
    ls.activation = r.u16() == 1 ? Activation::softmax : Activation::relu;
    ls.dropout_rate = r.f64();
    ls.batch_norm = r.u16() == 1;
    c.mlp.spec.push_back(ls);
  }
  if (c.mlp.spec.empty())
    throw IoError(IoErrorKind::dim_chain, "'" + path + "': checkpoint has no layers");
  for (size_t i = 0; i + 1 < c.mlp.spec.size(); ++i)
    if (c.mlp.spec[i].out_dim != c.mlp.spec[i + 1].in_dim)
      throw IoError(IoErrorKind::dim_chain, "'" + path + "': layer dimensions do not chain");
  if (c.mlp.spec.front().in_dim != static_cast<int>(k))
    throw IoError(IoErrorKind::dim_chain,
                  "'" + path + "': classifier input does not match the pca components");
  if (c.mlp.spec.back().out_dim != c.mlp.class_count ||
      c.mlp.class_count != static_cast<int>(label_count))
    throw IoError(IoErrorKind::dim_chain,
                  "'" + path + "': class count does not match the label set");

  for (const auto& ls : c.mlp.spec) {
    Layer layer;
    layer.weights = Matrix(ls.out_dim, ls.in_dim);
    layer.weights.data = r.f64s(static_cast<uint32_t>(ls.out_dim) * ls.in_dim);
    layer.bias = r.f64s(static_cast<uint32_t>(ls.out_dim));
    if (ls.batch_norm) {
      layer.gamma = r.f64s(static_cast<uint32_t>(ls.out_dim));
      layer.beta = r.f64s(static_cast<uint32_t>(ls.out_dim));
      layer.running_mean = r.f64s(static_cast<uint32_t>(ls.out_dim));
      layer.running_var = r.f64s(static_cast<uint32_t>(ls.out_dim));
    }
    c.mlp.layers.push_back(std::move(layer));
  }
  return c;
}

}  // namespace fhc
