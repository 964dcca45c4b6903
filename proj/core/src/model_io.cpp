#include "sigverify/model_io.hpp"

#include "binary_io.hpp"
#include "sigverify/errors.hpp"

namespace sigverify {

std::vector<unsigned char> serialize(const GruModel& model) {
  detail::ByteWriter w;
  w.magic("GRUM");
  w.put<std::uint32_t>(kModelFormatVersion);
  const auto dims = model.dims();
  for (int d : {dims.input, dims.hidden1, dims.hidden2, dims.embedding}) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(d));
  }
  GruModel::visit(model, [&w](const auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) w.put<double>(t.data()[i]);
  });
  return w.take();
}

GruModel deserialize_model(std::span<const unsigned char> bytes, std::optional<int> expected_input_dim) {
  detail::ByteReader r(bytes);
  r.expect_magic("GRUM");
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw ParseError("unsupported model version " + std::to_string(version));
  }
  ModelDims dims;
  dims.input = static_cast<int>(r.get<std::uint32_t>());
  dims.hidden1 = static_cast<int>(r.get<std::uint32_t>());
  dims.hidden2 = static_cast<int>(r.get<std::uint32_t>());
  dims.embedding = static_cast<int>(r.get<std::uint32_t>());
  for (int d : {dims.input, dims.hidden1, dims.hidden2, dims.embedding}) {
    if (d <= 0 || d > (1 << 16)) throw ParseError("implausible model dimension " + std::to_string(d));
  }
  if (expected_input_dim && *expected_input_dim != dims.input) {
    throw InvalidArgument("model expects " + std::to_string(dims.input) +
                          " input features but the feature configuration produces " +
                          std::to_string(*expected_input_dim));
  }
  GruModel model = GruModel::zeros(dims);
  if (bytes.size() != 24 + model.parameter_count() * sizeof(double)) {
    throw ParseError("model container size does not match its dimensions");
  }
  GruModel::visit(model, [&r](auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = r.get<double>();
  });
  return model;
}

void save_model(const GruModel& model, const std::filesystem::path& path) {
  detail::write_binary_file(path.string(), serialize(model));
}

GruModel load_model(const std::filesystem::path& path, std::optional<int> expected_input_dim) {
  return deserialize_model(detail::read_binary_file(path.string()), expected_input_dim);
}

}  // namespace sigverify
