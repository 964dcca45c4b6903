#include "sigverify/gru.hpp"

#include <cmath>

#include "sigverify/errors.hpp"
#include "sigverify/rng.hpp"

namespace sigverify {

namespace {

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

void check_layer_input(const GruLayerParams& layer, const Matrix& inputs, const Vector& y0) {
  if (inputs.rows() != layer.input_dim()) {
    throw InvalidArgument("gru: input dimension " + std::to_string(inputs.rows()) +
                          " does not match layer input " + std::to_string(layer.input_dim()));
  }
  if (y0.size() != layer.hidden_dim()) throw InvalidArgument("gru: initial state dimension mismatch");
  if (!inputs.allFinite()) throw InvalidArgument("gru: non-finite input");
}

void fill_uniform(Matrix& m, double bound, Rng& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-bound, bound);
  }
}

}  // namespace

GruLayerParams GruLayerParams::zeros(int input_dim, int hidden_dim) {
  if (input_dim <= 0 || hidden_dim <= 0) throw InvalidArgument("gru: dimensions must be positive");
  GruLayerParams p;
  p.w_reset = p.w_update = p.w_candidate = Matrix::Zero(hidden_dim, input_dim);
  p.u_reset = p.u_update = p.u_candidate = Matrix::Zero(hidden_dim, hidden_dim);
  p.b_reset = p.b_update = p.b_candidate = Vector::Zero(hidden_dim);
  return p;
}

GruModel GruModel::zeros(const ModelDims& dims) {
  if (dims.embedding <= 0) throw InvalidArgument("gru: embedding dimension must be positive");
  GruModel m;
  m.layer1 = GruLayerParams::zeros(dims.input, dims.hidden1);
  m.layer2 = GruLayerParams::zeros(dims.hidden1, dims.hidden2);
  m.fc_weight = Matrix::Zero(dims.embedding, dims.hidden2);
  m.fc_bias = Vector::Zero(dims.embedding);
  return m;
}

GruModel GruModel::random(const ModelDims& dims, std::uint64_t seed) {
  GruModel m = zeros(dims);
  Rng rng(seed);
  for (auto* layer : {&m.layer1, &m.layer2}) {
    const double in_bound = 1.0 / std::sqrt(static_cast<double>(layer->input_dim()));
    const double hid_bound = 1.0 / std::sqrt(static_cast<double>(layer->hidden_dim()));
    fill_uniform(layer->w_reset, in_bound, rng);
    fill_uniform(layer->w_update, in_bound, rng);
    fill_uniform(layer->w_candidate, in_bound, rng);
    fill_uniform(layer->u_reset, hid_bound, rng);
    fill_uniform(layer->u_update, hid_bound, rng);
    fill_uniform(layer->u_candidate, hid_bound, rng);
  }
  fill_uniform(m.fc_weight, 1.0 / std::sqrt(static_cast<double>(dims.hidden2)), rng);
  return m;
}

ModelDims GruModel::dims() const {
  return {layer1.input_dim(), layer1.hidden_dim(), layer2.hidden_dim(), embedding_dim()};
}

std::size_t GruModel::parameter_count() const {
  std::size_t n = 0;
  visit(*this, [&n](const auto& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

std::vector<double> GruModel::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  visit(*this, [&flat](const auto& t) { flat.insert(flat.end(), t.data(), t.data() + t.size()); });
  return flat;
}

void GruModel::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw InvalidArgument("gru: flat parameter size mismatch");
  std::size_t pos = 0;
  visit(*this, [&](auto& t) {
    std::copy_n(flat.data() + pos, t.size(), t.data());
    pos += static_cast<std::size_t>(t.size());
  });
}

GruModel& GruModel::operator+=(const GruModel& rhs) {
  layer1.w_reset += rhs.layer1.w_reset;
  layer1.w_update += rhs.layer1.w_update;
  layer1.w_candidate += rhs.layer1.w_candidate;
  layer1.u_reset += rhs.layer1.u_reset;
  layer1.u_update += rhs.layer1.u_update;
  layer1.u_candidate += rhs.layer1.u_candidate;
  layer1.b_reset += rhs.layer1.b_reset;
  layer1.b_update += rhs.layer1.b_update;
  layer1.b_candidate += rhs.layer1.b_candidate;
  layer2.w_reset += rhs.layer2.w_reset;
  layer2.w_update += rhs.layer2.w_update;
  layer2.w_candidate += rhs.layer2.w_candidate;
  layer2.u_reset += rhs.layer2.u_reset;
  layer2.u_update += rhs.layer2.u_update;
  layer2.u_candidate += rhs.layer2.u_candidate;
  layer2.b_reset += rhs.layer2.b_reset;
  layer2.b_update += rhs.layer2.b_update;
  layer2.b_candidate += rhs.layer2.b_candidate;
  fc_weight += rhs.fc_weight;
  fc_bias += rhs.fc_bias;
  return *this;
}

GruTrace gru_forward_trace(const GruLayerParams& layer, const Matrix& inputs, const Vector& y0) {
  check_layer_input(layer, inputs, y0);
  const Eigen::Index steps = inputs.cols();
  const Eigen::Index h = layer.hidden_dim();

  GruTrace tr;
  tr.inputs = inputs;
  tr.hidden.resize(h, steps + 1);
  tr.reset.resize(h, steps);
  tr.update.resize(h, steps);
  tr.candidate.resize(h, steps);
  tr.hidden.col(0) = y0;

  // Input projections for all timesteps at once.
  const Matrix xr = (layer.w_reset * inputs).colwise() + layer.b_reset;
  const Matrix xz = (layer.w_update * inputs).colwise() + layer.b_update;
  const Matrix xc = (layer.w_candidate * inputs).colwise() + layer.b_candidate;

  for (Eigen::Index t = 0; t < steps; ++t) {
    const auto prev = tr.hidden.col(t);
    Vector r = xr.col(t) + layer.u_reset * prev;
    Vector z = xz.col(t) + layer.u_update * prev;
    r = r.unaryExpr(&sigmoid);
    z = z.unaryExpr(&sigmoid);
    const Vector gated = r.cwiseProduct(prev);
    Vector c = xc.col(t) + layer.u_candidate * gated;
    c = c.array().tanh();
    tr.reset.col(t) = r;
    tr.update.col(t) = z;
    tr.candidate.col(t) = c;
    tr.hidden.col(t + 1) = z.cwiseProduct(prev) + (Vector::Ones(h) - z).cwiseProduct(c);
  }
  return tr;
}

Matrix gru_forward(const GruLayerParams& layer, const Matrix& inputs, const Vector& y0) {
  auto tr = gru_forward_trace(layer, inputs, y0);
  return tr.hidden.rightCols(inputs.cols());
}

Matrix gru_backward(const GruLayerParams& layer, const GruTrace& tr, const Matrix& d_hidden,
                    GruLayerParams& grads) {
  const Eigen::Index steps = tr.inputs.cols();
  const Eigen::Index h = layer.hidden_dim();
  Matrix d_inputs = Matrix::Zero(tr.inputs.rows(), steps);
  Vector dy_next = Vector::Zero(h);  // gradient flowing back from step t+1

  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    const Vector dy = d_hidden.col(t) + dy_next;
    const auto prev = tr.hidden.col(t);
    const auto r = tr.reset.col(t);
    const auto z = tr.update.col(t);
    const auto c = tr.candidate.col(t);
    const auto x = tr.inputs.col(t);

    const Vector dz = dy.cwiseProduct(prev - c);
    const Vector dc = dy.cwiseProduct(Vector::Ones(h) - z);
    Vector dprev = dy.cwiseProduct(z);

    // candidate pre-activation
    const Vector da_c = dc.array() * (1.0 - c.array().square());
    const Vector gated = r.cwiseProduct(prev);
    grads.w_candidate.noalias() += da_c * x.transpose();
    grads.u_candidate.noalias() += da_c * gated.transpose();
    grads.b_candidate += da_c;
    const Vector d_gated = layer.u_candidate.transpose() * da_c;
    const Vector dr = d_gated.cwiseProduct(prev);
    dprev += d_gated.cwiseProduct(r);

    const Vector da_z = dz.array() * z.array() * (1.0 - z.array());
    grads.w_update.noalias() += da_z * x.transpose();
    grads.u_update.noalias() += da_z * prev.transpose();
    grads.b_update += da_z;

    const Vector da_r = dr.array() * r.array() * (1.0 - r.array());
    grads.w_reset.noalias() += da_r * x.transpose();
    grads.u_reset.noalias() += da_r * prev.transpose();
    grads.b_reset += da_r;

    dprev.noalias() += layer.u_update.transpose() * da_z;
    dprev.noalias() += layer.u_reset.transpose() * da_r;
    d_inputs.col(t).noalias() = layer.w_candidate.transpose() * da_c +
                                layer.w_update.transpose() * da_z +
                                layer.w_reset.transpose() * da_r;
    dy_next = dprev;
  }
  return d_inputs;
}

Matrix to_columns(const FeatureSequence& seq) {
  Matrix m(static_cast<Eigen::Index>(seq.dim()), static_cast<Eigen::Index>(seq.rows()));
  for (std::size_t r = 0; r < seq.rows(); ++r) {
    for (std::size_t c = 0; c < seq.dim(); ++c) {
      m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = seq.at(r, c);
    }
  }
  return m;
}

EmbeddingTrace embed_trace(const GruModel& model, const FeatureSequence& features) {
  if (static_cast<int>(features.dim()) != model.input_dim()) {
    throw InvalidArgument("embed: feature dimension " + std::to_string(features.dim()) +
                          " does not match model input " + std::to_string(model.input_dim()));
  }
  if (features.empty()) throw InvalidArgument("embed: empty feature sequence");
  EmbeddingTrace tr;
  tr.layer1 = gru_forward_trace(model.layer1, to_columns(features), Vector::Zero(model.layer1.hidden_dim()));
  tr.layer2 = gru_forward_trace(model.layer2, tr.layer1.hidden.rightCols(features.rows()),
                                Vector::Zero(model.layer2.hidden_dim()));
  tr.embedding = model.fc_weight * tr.layer2.hidden.col(tr.layer2.hidden.cols() - 1) + model.fc_bias;
  return tr;
}

Vector embed(const GruModel& model, const FeatureSequence& features) {
  return embed_trace(model, features).embedding;
}

void embed_backward(const GruModel& model, const EmbeddingTrace& tr, const Vector& d_embedding,
                    GruModel& grads) {
  const Eigen::Index steps = tr.layer2.inputs.cols();
  const auto last = tr.layer2.hidden.col(steps);
  grads.fc_weight.noalias() += d_embedding * last.transpose();
  grads.fc_bias += d_embedding;

  Matrix d_hidden2 = Matrix::Zero(model.layer2.hidden_dim(), steps);
  d_hidden2.col(steps - 1) = model.fc_weight.transpose() * d_embedding;
  const Matrix d_hidden1 = gru_backward(model.layer2, tr.layer2, d_hidden2, grads.layer2);
  gru_backward(model.layer1, tr.layer1, d_hidden1, grads.layer1);
}

}  // namespace sigverify
