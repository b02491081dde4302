// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/nn/modules.hpp"

#include <cmath>

#include "speechchain/common.hpp"

namespace speechchain::nn {

void init_uniform(Parameter& p, Rng& rng, double bound) {
  for (long c = 0; c < p.value.cols(); ++c)
    for (long r = 0; r < p.value.rows(); ++r) p.value(r, c) = rng.uniform_real(-bound, bound);
}

Linear::Linear(InitCtx ctx, const std::string& name, int in, int out, bool bias) {
  w_ = &ctx.store.create(name + ".w", out, in);
  init_uniform(*w_, ctx.rng, 1.0 / std::sqrt(static_cast<double>(in)));
  if (bias) b_ = &ctx.store.create(name + ".b", out, 1);
}

Var Linear::apply(Graph& g, Var x) const {
  SC_CHECK(w_ != nullptr, "Linear used before construction");
  Var y = g.matmul(g.param(*w_), x);
  if (b_) y = g.add_col_broadcast(y, g.param(*b_));
  return y;
}

Embedding::Embedding(InitCtx ctx, const std::string& name, int vocab, int dim) {
  table_ = &ctx.store.create(name + ".table", dim, vocab);
  init_uniform(*table_, ctx.rng, 1.0 / std::sqrt(static_cast<double>(dim)));
}

Var Embedding::lookup(Graph& g, const std::vector<int>& ids) const {
  SC_CHECK(table_ != nullptr, "Embedding used before construction");
  return g.gather_cols(g.param(*table_), ids);
}

LSTMCell::LSTMCell(InitCtx ctx, const std::string& name, int input, int hidden) : hidden_(hidden) {
  w_ = &ctx.store.create(name + ".w", 4 * hidden, input + hidden);
  b_ = &ctx.store.create(name + ".b", 4 * hidden, 1);
  init_uniform(*w_, ctx.rng, 1.0 / std::sqrt(static_cast<double>(input + hidden)));
  // Forget-gate bias starts at 1 so early training does not wash out state.
  b_->value.block(hidden, 0, hidden, 1).setConstant(1.0);
}

LSTMCell::State LSTMCell::initial(Graph& g, int batch) const {
  return {g.constant(Mat::Zero(hidden_, batch)), g.constant(Mat::Zero(hidden_, batch))};
}

LSTMCell::State LSTMCell::step(Graph& g, Var x, const State& prev) const {
  Var xh = g.concat_rows({x, prev.h});
  Var z = g.add_col_broadcast(g.matmul(g.param(*w_), xh), g.param(*b_));
  Var i = g.sigmoid_(g.slice_rows(z, 0, hidden_));
  Var f = g.sigmoid_(g.slice_rows(z, hidden_, hidden_));
  Var gg = g.tanh_(g.slice_rows(z, 2 * hidden_, hidden_));
  Var o = g.sigmoid_(g.slice_rows(z, 3 * hidden_, hidden_));
  Var c = g.add(g.cmul(f, prev.c), g.cmul(i, gg));
  Var h = g.cmul(o, g.tanh_(c));
  return {h, c};
}

GRUCell::GRUCell(InitCtx ctx, const std::string& name, int input, int hidden) : hidden_(hidden) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(input + hidden));
  w_zr_ = &ctx.store.create(name + ".w_zr", 2 * hidden, input + hidden);
  b_zr_ = &ctx.store.create(name + ".b_zr", 2 * hidden, 1);
  w_h_ = &ctx.store.create(name + ".w_h", hidden, input + hidden);
  b_h_ = &ctx.store.create(name + ".b_h", hidden, 1);
  init_uniform(*w_zr_, ctx.rng, bound);
  init_uniform(*w_h_, ctx.rng, bound);
}

Var GRUCell::initial(Graph& g, int batch) const { return g.constant(Mat::Zero(hidden_, batch)); }

Var GRUCell::step(Graph& g, Var x, Var h_prev) const {
  Var xh = g.concat_rows({x, h_prev});
  Var zr = g.add_col_broadcast(g.matmul(g.param(*w_zr_), xh), g.param(*b_zr_));
  Var z = g.sigmoid_(g.slice_rows(zr, 0, hidden_));
  Var r = g.sigmoid_(g.slice_rows(zr, hidden_, hidden_));
  Var xrh = g.concat_rows({x, g.cmul(r, h_prev)});
  Var h_tilde = g.tanh_(g.add_col_broadcast(g.matmul(g.param(*w_h_), xrh), g.param(*b_h_)));
  // h' = (1-z) .* h + z .* h~
  Var one = g.constant(Mat::Ones(hidden_, g.value(x).cols()));
  return g.add(g.cmul(g.sub(one, z), h_prev), g.cmul(z, h_tilde));
}

Conv1d::Conv1d(InitCtx ctx, const std::string& name, int in_channels, int out_channels, int kernel,
               int stride, int pad)
    : kernel_(kernel), stride_(stride), pad_(pad < 0 ? kernel / 2 : pad) {
  w_ = &ctx.store.create(name + ".w", out_channels, in_channels * kernel);
  b_ = &ctx.store.create(name + ".b", out_channels, 1);
  init_uniform(*w_, ctx.rng, 1.0 / std::sqrt(static_cast<double>(in_channels * kernel)));
}

Var Conv1d::apply(Graph& g, Var x) const {
  Var patches = g.im2col(x, kernel_, stride_, pad_);
  return g.add_col_broadcast(g.matmul(g.param(*w_), patches), g.param(*b_));
}

Highway::Highway(InitCtx ctx, const std::string& name, int dim, double leaky_slope)
    : carry_(ctx, name + ".carry", dim, dim),
      gate_(ctx, name + ".gate", dim, dim),
      slope_(leaky_slope) {
  // Gate bias starts negative so layers begin as pass-through.
  ctx.store.at(name + ".gate.b").value.setConstant(-1.0);
}

Var Highway::apply(Graph& g, Var x) const {
  Var h = g.leaky_relu(carry_.apply(g, x), slope_);
  Var t = g.sigmoid_(gate_.apply(g, x));
  Var one = g.constant(Mat::Ones(g.value(x).rows(), g.value(x).cols()));
  return g.add(g.cmul(t, h), g.cmul(g.sub(one, t), x));
}

AdditiveAttention::AdditiveAttention(InitCtx ctx, const std::string& name, int enc_dim,
                                     int query_dim, int attn_dim)
    : key_(ctx, name + ".key", enc_dim, attn_dim, /*bias=*/true),
      query_(ctx, name + ".query", query_dim, attn_dim, /*bias=*/false) {
  v_ = &ctx.store.create(name + ".v", 1, attn_dim);
  init_uniform(*v_, ctx.rng, 1.0 / std::sqrt(static_cast<double>(attn_dim)));
}

AdditiveAttention::Memory AdditiveAttention::prepare(Graph& g, const std::vector<Var>& enc_outputs,
                                                     const std::vector<Var>& step_masks) const {
  SC_CHECK(!enc_outputs.empty(), "attention: empty encoder output");
  SC_CHECK(enc_outputs.size() == step_masks.size(), "attention: %zu steps but %zu masks",
           enc_outputs.size(), step_masks.size());
  Memory mem;
  mem.batch = static_cast<int>(g.value(enc_outputs[0]).cols());
  mem.values = enc_outputs;
  Mat bias(static_cast<long>(enc_outputs.size()), mem.batch);
  for (std::size_t t = 0; t < enc_outputs.size(); ++t) {
    mem.keys.push_back(key_.apply(g, enc_outputs[t]));
    const Mat& m = g.value(step_masks[t]);
    for (int b = 0; b < mem.batch; ++b)
      bias(static_cast<long>(t), b) = m(0, b) > 0.5 ? 0.0 : -1e30;
  }
  mem.mask_bias = g.constant(std::move(bias));
  return mem;
}

std::pair<Var, Var> AdditiveAttention::attend(Graph& g, const Memory& mem, Var query) const {
  Var q = query_.apply(g, query);
  Var v_row = g.param(*v_);
  std::vector<Var> score_rows;
  score_rows.reserve(mem.keys.size());
  for (const Var& key : mem.keys)
    score_rows.push_back(g.matmul(v_row, g.tanh_(g.add(key, q))));
  Var scores = g.add(g.concat_rows(score_rows), mem.mask_bias);  // (T x B)
  Var alpha = g.softmax_cols(scores);
  Var context;
  for (std::size_t t = 0; t < mem.values.size(); ++t) {
    Var weighted = g.mul_row_broadcast(mem.values[t], g.slice_rows(alpha, static_cast<int>(t), 1));
    context = t == 0 ? weighted : g.add(context, weighted);
  }
  return {context, alpha};
}

Var masked_update(Graph& g, Var fresh, Var prev, Var mask, Var one_minus_mask) {
  return g.add(g.mul_row_broadcast(fresh, mask), g.mul_row_broadcast(prev, one_minus_mask));
}

SequenceBatch make_sequence_batch(Graph& g, const std::vector<Mat>& items) {
  SC_CHECK(!items.empty(), "make_sequence_batch: no items");
  SequenceBatch out;
  out.batch = static_cast<int>(items.size());
  const long dim = items[0].rows();
  int t_max = 0;
  for (const Mat& m : items) {
    SC_CHECK(m.rows() == dim, "make_sequence_batch: inconsistent feature dim");
    SC_CHECK(m.cols() >= 1, "make_sequence_batch: empty item");
    out.lengths.push_back(static_cast<int>(m.cols()));
    t_max = std::max(t_max, static_cast<int>(m.cols()));
  }
  for (int t = 0; t < t_max; ++t) {
    Mat step = Mat::Zero(dim, out.batch);
    Mat mask = Mat::Zero(1, out.batch);
    for (int b = 0; b < out.batch; ++b) {
      if (t < out.lengths[static_cast<size_t>(b)]) {
        step.col(b) = items[static_cast<size_t>(b)].col(t);
        mask(0, b) = 1.0;
      }
    }
    out.steps.push_back(g.constant(std::move(step)));
    out.masks.push_back(g.constant(mask));
    out.inv_masks.push_back(g.constant((1.0 - mask.array()).matrix()));
  }
  return out;
}

}  // namespace speechchain::nn
