// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "speechchain/nn/graph.hpp"

namespace speechchain::nn {

// Construction context: every module registers its parameters into the
// store (creation order is the checkpoint layout) and initializes them from
// the shared rng.
struct InitCtx {
  ParamStore& store;
  Rng& rng;
};

void init_uniform(Parameter& p, Rng& rng, double bound);

class Linear {
 public:
  Linear() = default;
  Linear(InitCtx ctx, const std::string& name, int in, int out, bool bias = true);
  Var apply(Graph& g, Var x) const;
  int out_dim() const { return w_ ? static_cast<int>(w_->value.rows()) : 0; }

 private:
  Parameter* w_ = nullptr;
  Parameter* b_ = nullptr;
};

class Embedding {
 public:
  Embedding() = default;
  Embedding(InitCtx ctx, const std::string& name, int vocab, int dim);
  Var lookup(Graph& g, const std::vector<int>& ids) const;  // (dim x ids.size())

 private:
  Parameter* table_ = nullptr;  // dim x vocab
};

class LSTMCell {
 public:
  struct State {
    Var h, c;
  };

  LSTMCell() = default;
  LSTMCell(InitCtx ctx, const std::string& name, int input, int hidden);
  State initial(Graph& g, int batch) const;
  State step(Graph& g, Var x, const State& prev) const;
  int hidden() const { return hidden_; }

 private:
  Parameter* w_ = nullptr;  // 4H x (in + H), gate order i,f,g,o
  Parameter* b_ = nullptr;  // forget-gate bias initialized to 1
  int hidden_ = 0;
};

class GRUCell {
 public:
  GRUCell() = default;
  GRUCell(InitCtx ctx, const std::string& name, int input, int hidden);
  Var initial(Graph& g, int batch) const;
  Var step(Graph& g, Var x, Var h_prev) const;
  int hidden() const { return hidden_; }

 private:
  Parameter* w_zr_ = nullptr;  // 2H x (in + H)
  Parameter* b_zr_ = nullptr;
  Parameter* w_h_ = nullptr;   // H x (in + H)
  Parameter* b_h_ = nullptr;
  int hidden_ = 0;
};

// 1-D convolution over time; input (C_in x T), output (C_out x T_out).
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(InitCtx ctx, const std::string& name, int in_channels, int out_channels, int kernel,
         int stride = 1, int pad = -1);  // pad = -1 means "same" (kernel/2) at stride 1
  Var apply(Graph& g, Var x) const;
  int out_channels() const { return w_ ? static_cast<int>(w_->value.rows()) : 0; }

 private:
  Parameter* w_ = nullptr;  // C_out x (C_in * kernel)
  Parameter* b_ = nullptr;
  int kernel_ = 1, stride_ = 1, pad_ = 0;
};

class Highway {
 public:
  Highway() = default;
  Highway(InitCtx ctx, const std::string& name, int dim, double leaky_slope);
  Var apply(Graph& g, Var x) const;

 private:
  Linear carry_, gate_;
  double slope_ = 0.01;
};

// Content-based additive attention. Keys are precomputed once per encoded
// sequence; attend() returns (context, weights) where the weights of each
// column sum to 1 over unmasked encoder positions.
class AdditiveAttention {
 public:
  struct Memory {
    std::vector<Var> values;  // encoder outputs, each (H x B)
    std::vector<Var> keys;    // projected, each (A x B)
    Var mask_bias;            // (T x B): 0 for real positions, -1e30 for padding
    int batch = 0;
  };

  AdditiveAttention() = default;
  AdditiveAttention(InitCtx ctx, const std::string& name, int enc_dim, int query_dim, int attn_dim);

  Memory prepare(Graph& g, const std::vector<Var>& enc_outputs,
                 const std::vector<Var>& step_masks) const;
  // query: (query_dim x B) -> context (H x B), weights (T x B).
  std::pair<Var, Var> attend(Graph& g, const Memory& mem, Var query) const;

 private:
  Linear key_;    // with bias
  Linear query_;  // no bias
  Parameter* v_ = nullptr;  // 1 x A
};

// mask (1xB): fresh where mask is 1, prev where 0. Keeps padded positions
// carrying their previous recurrent state so padding never leaks.
Var masked_update(Graph& g, Var fresh, Var prev, Var mask, Var one_minus_mask);

// Batched time-major sequence: steps[t] is (D x B); masks[t] is (1 x B).
struct SequenceBatch {
  std::vector<Var> steps;
  std::vector<Var> masks;
  std::vector<Var> inv_masks;
  std::vector<int> lengths;
  int batch = 0;

  int time() const { return static_cast<int>(steps.size()); }
};

// Pad item matrices (each D x T_i, column-per-frame) into a SequenceBatch.
SequenceBatch make_sequence_batch(Graph& g, const std::vector<Mat>& items);

}  // namespace speechchain::nn
