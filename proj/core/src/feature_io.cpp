#include <fstream>
#include <iterator>

#include "binary_io.hpp"
#include "sigverify/errors.hpp"
#include "sigverify/features.hpp"

namespace sigverify {

namespace detail {

std::vector<unsigned char> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::string& path, std::span<const unsigned char> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace detail

std::vector<unsigned char> serialize(const FeatureSequence& seq) {
  detail::ByteWriter w;
  w.magic("LNPS");
  w.put<std::uint32_t>(kFeatureFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(seq.rows()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(seq.dim()));
  const auto& cfg = seq.config();
  w.put<std::uint32_t>(static_cast<std::uint32_t>(cfg.window_half));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(cfg.level));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(cfg.variant));
  w.put<std::uint32_t>((seq.normalized() ? 1u : 0u) | (cfg.single_level ? 2u : 0u));
  for (double v : seq.values()) w.put<double>(v);
  return w.take();
}

FeatureSequence deserialize_features(std::span<const unsigned char> bytes) {
  detail::ByteReader r(bytes);
  r.expect_magic("LNPS");
  const auto version = r.get<std::uint32_t>();
  if (version != kFeatureFormatVersion) {
    throw ParseError("unsupported feature container version " + std::to_string(version));
  }
  const auto rows = r.get<std::uint32_t>();
  const auto dim = r.get<std::uint32_t>();
  FeatureConfig cfg;
  cfg.window_half = static_cast<int>(r.get<std::uint32_t>());
  cfg.level = static_cast<int>(r.get<std::uint32_t>());
  const auto variant = r.get<std::uint32_t>();
  if (variant > 2) throw ParseError("unknown feature variant code " + std::to_string(variant));
  cfg.variant = static_cast<FeatureVariant>(variant);
  const auto flags = r.get<std::uint32_t>();
  cfg.single_level = (flags & 2u) != 0;

  const std::uint64_t payload = std::uint64_t{rows} * dim * sizeof(double);
  if (bytes.size() != 32 + payload) throw ParseError("feature container size does not match header");

  FeatureSequence seq(rows, dim, cfg);
  seq.set_normalized((flags & 1u) != 0);
  for (auto& v : seq.values()) v = r.get<double>();
  if (!r.done()) throw ParseError("trailing bytes after feature data");
  return seq;
}

void save_features(const FeatureSequence& seq, const std::filesystem::path& path) {
  detail::write_binary_file(path.string(), serialize(seq));
}

FeatureSequence load_features(const std::filesystem::path& path) {
  return deserialize_features(detail::read_binary_file(path.string()));
}

}  // namespace sigverify
