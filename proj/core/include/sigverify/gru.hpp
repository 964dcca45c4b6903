#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sigverify/features.hpp"

namespace sigverify {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One GRU layer:
///   r_t = sigm(W_r x_t + U_r y_{t-1} + b_r)
///   z_t = sigm(W_z x_t + U_z y_{t-1} + b_z)
///   c_t = tanh(W x_t + U (r_t * y_{t-1}) + b)
///   y_t = z_t * y_{t-1} + (1 - z_t) * c_t
struct GruLayerParams {
  Matrix w_reset, w_update, w_candidate;  // hidden x input
  Matrix u_reset, u_update, u_candidate;  // hidden x hidden
  Vector b_reset, b_update, b_candidate;  // hidden

  static GruLayerParams zeros(int input_dim, int hidden_dim);

  int input_dim() const { return static_cast<int>(w_reset.cols()); }
  int hidden_dim() const { return static_cast<int>(w_reset.rows()); }

  /// Visits every tensor in declaration order.
  template <typename Self, typename F>
  static void visit(Self& self, F&& f) {
    f(self.w_reset); f(self.w_update); f(self.w_candidate);
    f(self.u_reset); f(self.u_update); f(self.u_candidate);
    f(self.b_reset); f(self.b_update); f(self.b_candidate);
  }
};

struct ModelDims {
  int input = 0;
  int hidden1 = 128;
  int hidden2 = 128;
  int embedding = 64;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Input -> GRU(h1) -> GRU(h2) -> FC(e). The embedding is the FC layer
/// applied to the last hidden state of the second GRU.
struct GruModel {
  GruLayerParams layer1;
  GruLayerParams layer2;
  Matrix fc_weight;  // e x h2
  Vector fc_bias;    // e

  static GruModel zeros(const ModelDims& dims);

  /// Weights uniform in (-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
  static GruModel random(const ModelDims& dims, std::uint64_t seed);

  ModelDims dims() const;
  int input_dim() const { return layer1.input_dim(); }
  int embedding_dim() const { return static_cast<int>(fc_bias.size()); }

  std::size_t parameter_count() const;

  template <typename Self, typename F>
  static void visit(Self& self, F&& f) {
    GruLayerParams::visit(self.layer1, f);
    GruLayerParams::visit(self.layer2, f);
    f(self.fc_weight);
    f(self.fc_bias);
  }

  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);

  /// Elementwise accumulate (shapes must match).
  GruModel& operator+=(const GruModel& rhs);
};

/// Intermediate activations of one layer over a sequence, kept for BPTT.
struct GruTrace {
  Matrix inputs;  // input x T
  Matrix hidden;  // hidden x (T + 1), column 0 is y0
  Matrix reset;   // hidden x T
  Matrix update;
  Matrix candidate;
};

/// Hidden states y_1..y_T as the columns of a hidden x T matrix.
Matrix gru_forward(const GruLayerParams& layer, const Matrix& inputs, const Vector& y0);

GruTrace gru_forward_trace(const GruLayerParams& layer, const Matrix& inputs, const Vector& y0);

/// Backpropagates d(loss)/d(y_t) (columns of d_hidden, hidden x T) through
/// the layer. Parameter gradients are added into `grads`; the returned
/// matrix holds d(loss)/d(x_t). The gradient w.r.t. y0 is dropped.
Matrix gru_backward(const GruLayerParams& layer, const GruTrace& trace, const Matrix& d_hidden,
                    GruLayerParams& grads);

/// Features as an F x N matrix, one column per timestep.
Matrix to_columns(const FeatureSequence& seq);

Vector embed(const GruModel& model, const FeatureSequence& features);

struct EmbeddingTrace {
  GruTrace layer1;
  GruTrace layer2;
  Vector embedding;
};

EmbeddingTrace embed_trace(const GruModel& model, const FeatureSequence& features);

/// Adds d(loss)/d(params) for a given d(loss)/d(embedding) into `grads`.
void embed_backward(const GruModel& model, const EmbeddingTrace& trace, const Vector& d_embedding,
                    GruModel& grads);

}  // namespace sigverify
