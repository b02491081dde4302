// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "speechchain/rng.hpp"

namespace speechchain::nn {

using Mat = Eigen::MatrixXd;

// A trainable tensor. Gradients accumulate across Graph::backward calls
// until zero_grad(); the optimizer consumes and clears them.
struct Parameter {
  std::string name;
  Mat value;
  Mat grad;

  Parameter(std::string n, int rows, int cols)
      : name(std::move(n)), value(Mat::Zero(rows, cols)), grad(Mat::Zero(rows, cols)) {}
  void zero_grad() { grad.setZero(); }
  std::uint64_t value_hash() const;
};

// Owns parameters in creation order (the order is part of the checkpoint
// contract, so model constructors must create parameters deterministically).
class ParamStore {
 public:
  Parameter& create(const std::string& name, int rows, int cols);
  Parameter& at(const std::string& name);
  const Parameter& at(const std::string& name) const;
  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return *params_[i]; }
  const Parameter& operator[](std::size_t i) const { return *params_[i]; }
  void zero_grads();
  double grad_sq_norm() const;
  std::uint64_t value_hash() const;  // order + content; for isolation checks

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

struct Var {
  int idx = -1;
  bool valid() const { return idx >= 0; }
};

// Define-by-run reverse-mode autodiff over dense double matrices. Nodes are
// created in topological order, so backward() is a single reverse sweep.
// A Graph instance is built for one forward pass and discarded afterwards.
class Graph {
 public:
  explicit Graph(bool training = false, Rng* rng = nullptr) : training_(training), rng_(rng) {}

  bool training() const { return training_; }

  Var constant(Mat m);
  Var scalar(double v);
  Var param(Parameter& p);

  const Mat& value(Var v) const { return node(v).value; }
  double scalar_value(Var v) const;

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var cmul(Var a, Var b);
  Var scale(Var a, double s);
  Var add_scalar(Var a, double s);
  Var matmul(Var a, Var b);
  Var add_col_broadcast(Var a, Var bias);   // a(DxB) + bias(Dx1) to every column
  Var mul_row_broadcast(Var a, Var m);      // a(DxB) scaled per column by m(1xB)
  Var tanh_(Var a);
  Var sigmoid_(Var a);
  Var leaky_relu(Var a, double slope);
  Var square(Var a);

  Var softmax_cols(Var scores);  // softmax over the rows of each column

  // Per-column cross entropy from logits: out(0,b) = -log softmax(col b)[ids[b]].
  Var cross_entropy_cols(Var logits, const std::vector<int>& ids);

  // Elementwise binary cross entropy from logits against constant targets.
  Var bce_with_logits(Var logits, const Mat& targets);

  Var sum(Var a);        // 1x1
  Var sum_cols(Var a);   // row sums -> (D x 1)
  Var mean(Var a);       // 1x1

  Var concat_rows(const std::vector<Var>& parts);
  Var concat_cols(const std::vector<Var>& parts);
  Var slice_rows(Var a, int r0, int n);
  Var slice_cols(Var a, int c0, int n);

  // Columns of `table` selected by ids; gradient scatter-adds.
  Var gather_cols(Var table, const std::vector<int>& ids);

  // Inverted dropout; identity when the graph is not in training mode.
  Var dropout(Var a, double p);

  // a(CxT) -> (C*kernel x T_out) patch matrix for 1-D convolution over time.
  Var im2col(Var a, int kernel, int stride, int pad);

  // Max over a width-w window along time, stride 1, same length (right pad).
  Var maxpool_time(Var a, int width);

  void backward(Var loss);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Mat value;
    Mat grad;                 // allocated on demand
    bool needs_grad = false;
    bool grad_set = false;
    std::function<void(Graph&, Node&)> back;  // empty for leaves
    Parameter* parameter = nullptr;
  };

  Node& node(Var v);
  const Node& node(Var v) const;
  Mat& grad_buffer(Node& n);
  void accumulate(Node& n, const Mat& g);
  Var make(Mat value, bool needs, std::function<void(Graph&, Node&)> back);

  std::deque<Node> nodes_;
  bool training_ = false;
  Rng* rng_ = nullptr;
};

}  // namespace speechchain::nn
