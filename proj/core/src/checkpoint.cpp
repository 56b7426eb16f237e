#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "dynlabel/errors.hpp"
#include "dynlabel/policy.hpp"

namespace dynlabel::policy {

namespace {

constexpr char kMagic[8] = {'D', 'L', 'B', 'L', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_le(std::ostream& out, T v) {
  static_assert(std::is_integral_v<T>);
  unsigned char buf[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  uint64_t v = 0;
  for (size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

void write_f32(std::ostream& out, float f) {
  write_le<uint32_t>(out, std::bit_cast<uint32_t>(f));
}

float read_f32(std::istream& in) {
  return std::bit_cast<float>(read_le<uint32_t>(in));
}

void write_store(std::ostream& out, const nn::ParamStore<float>& store) {
  for (const auto& e : store.entries()) {
    write_le<uint16_t>(out, static_cast<uint16_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    write_le<uint8_t>(out, static_cast<uint8_t>(e.shape.size()));
    for (size_t d : e.shape) write_le<uint64_t>(out, d);
    const float* v = store.values() + e.offset;
    for (size_t i = 0; i < e.size; ++i) write_f32(out, v[i]);
  }
}

void read_store(std::istream& in, nn::ParamStore<float>& store,
                const std::string& path) {
  for (const auto& e : store.entries()) {
    uint16_t name_len = read_le<uint16_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (name != e.name)
      throw DataError(path + ": tensor '" + name + "' does not match expected '" +
                      e.name + "'");
    uint8_t ndim = read_le<uint8_t>(in);
    std::vector<size_t> shape(ndim);
    for (auto& d : shape) d = static_cast<size_t>(read_le<uint64_t>(in));
    if (shape != e.shape)
      throw DataError(path + ": tensor '" + name + "' has mismatched shape");
    float* v = store.values() + e.offset;
    for (size_t i = 0; i < e.size; ++i) v[i] = read_f32(in);
    if (!in) throw DataError(path + ": truncated checkpoint");
  }
}

}  // namespace

void save_checkpoint(const Policy& policy, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  out.write(kMagic, sizeof(kMagic));
  write_le<uint32_t>(out, kVersion);
  write_le<uint64_t>(out, policy.fingerprint());
  uint32_t tensors = static_cast<uint32_t>(policy.actor().store().entries().size() +
                                           policy.critic().store().entries().size());
  write_le<uint32_t>(out, tensors);
  write_store(out, policy.actor().store());
  write_store(out, policy.critic().store());
  if (!out) throw DataError("failed writing checkpoint '" + path + "'");
}

Policy load_checkpoint(const std::string& path, const PolicyConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError(path + ": not a checkpoint file (bad magic)");
  uint32_t version = read_le<uint32_t>(in);
  if (version != kVersion)
    throw DataError(path + ": checkpoint format version " +
                    std::to_string(version) + " needs migration; this build reads version " +
                    std::to_string(kVersion));
  uint64_t fp = read_le<uint64_t>(in);
  Policy policy(cfg);
  if (fp != policy.fingerprint())
    throw DataError(path + ": incompatible checkpoint (config fingerprint mismatch)");
  uint32_t tensors = read_le<uint32_t>(in);
  uint32_t expected = static_cast<uint32_t>(policy.actor().store().entries().size() +
                                            policy.critic().store().entries().size());
  if (tensors != expected)
    throw DataError(path + ": unexpected tensor count");
  read_store(in, policy.actor().store(), path);
  read_store(in, policy.critic().store(), path);
  return policy;
}

}  // namespace dynlabel::policy
