// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/nn/graph.hpp"

#include <cmath>

#include "speechchain/common.hpp"

namespace speechchain::nn {

std::uint64_t Parameter::value_hash() const {
  return fnv1a(value.data(), sizeof(double) * static_cast<std::size_t>(value.size()));
}

Parameter& ParamStore::create(const std::string& name, int rows, int cols) {
  for (const auto& p : params_)
    SC_CHECK(p->name != name, "duplicate parameter name '%s'", name.c_str());
  params_.push_back(std::make_unique<Parameter>(name, rows, cols));
  return *params_.back();
}

Parameter& ParamStore::at(const std::string& name) {
  for (auto& p : params_)
    if (p->name == name) return *p;
  throw_error("no parameter named '%s'", name.c_str());
}

const Parameter& ParamStore::at(const std::string& name) const {
  for (const auto& p : params_)
    if (p->name == name) return *p;
  throw_error("no parameter named '%s'", name.c_str());
}

void ParamStore::zero_grads() {
  for (auto& p : params_) p->zero_grad();
}

double ParamStore::grad_sq_norm() const {
  double total = 0.0;
  for (const auto& p : params_) total += p->grad.squaredNorm();
  return total;
}

std::uint64_t ParamStore::value_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& p : params_) {
    h = fnv1a(p->name.data(), p->name.size(), h);
    h = fnv1a(p->value.data(), sizeof(double) * static_cast<std::size_t>(p->value.size()), h);
  }
  return h;
}

Graph::Node& Graph::node(Var v) {
  SC_CHECK(v.idx >= 0 && static_cast<std::size_t>(v.idx) < nodes_.size(), "invalid Var");
  return nodes_[static_cast<std::size_t>(v.idx)];
}

const Graph::Node& Graph::node(Var v) const {
  SC_CHECK(v.idx >= 0 && static_cast<std::size_t>(v.idx) < nodes_.size(), "invalid Var");
  return nodes_[static_cast<std::size_t>(v.idx)];
}

Mat& Graph::grad_buffer(Node& n) {
  if (!n.grad_set) {
    n.grad = Mat::Zero(n.value.rows(), n.value.cols());
    n.grad_set = true;
  }
  return n.grad;
}

void Graph::accumulate(Node& n, const Mat& g) {
  if (!n.needs_grad) return;
  grad_buffer(n) += g;
}

Var Graph::make(Mat value, bool needs, std::function<void(Graph&, Node&)> back) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::constant(Mat m) { return make(std::move(m), false, nullptr); }

Var Graph::scalar(double v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return constant(std::move(m));
}

double Graph::scalar_value(Var v) const {
  const Mat& m = node(v).value;
  SC_CHECK(m.rows() == 1 && m.cols() == 1, "scalar_value: node is %ldx%ld",
           static_cast<long>(m.rows()), static_cast<long>(m.cols()));
  return m(0, 0);
}

Var Graph::param(Parameter& p) {
  Var v = make(p.value, true, nullptr);
  node(v).parameter = &p;
  return v;
}

Var Graph::add(Var a, Var b) {
  Node& na = node(a);
  Node& nb = node(b);
  SC_CHECK(na.value.rows() == nb.value.rows() && na.value.cols() == nb.value.cols(),
           "add: shape mismatch %ldx%ld vs %ldx%ld", static_cast<long>(na.value.rows()),
           static_cast<long>(na.value.cols()), static_cast<long>(nb.value.rows()),
           static_cast<long>(nb.value.cols()));
  Node* pa = &na;
  Node* pb = &nb;
  return make(na.value + nb.value, na.needs_grad || nb.needs_grad,
              [pa, pb](Graph& g, Node& out) {
                g.accumulate(*pa, out.grad);
                g.accumulate(*pb, out.grad);
              });
}

Var Graph::sub(Var a, Var b) {
  Node& na = node(a);
  Node& nb = node(b);
  SC_CHECK(na.value.rows() == nb.value.rows() && na.value.cols() == nb.value.cols(),
           "sub: shape mismatch");
  Node* pa = &na;
  Node* pb = &nb;
  return make(na.value - nb.value, na.needs_grad || nb.needs_grad,
              [pa, pb](Graph& g, Node& out) {
                g.accumulate(*pa, out.grad);
                if (pb->needs_grad) g.grad_buffer(*pb) -= out.grad;
              });
}

Var Graph::cmul(Var a, Var b) {
  Node& na = node(a);
  Node& nb = node(b);
  SC_CHECK(na.value.rows() == nb.value.rows() && na.value.cols() == nb.value.cols(),
           "cmul: shape mismatch");
  Node* pa = &na;
  Node* pb = &nb;
  return make(na.value.cwiseProduct(nb.value), na.needs_grad || nb.needs_grad,
              [pa, pb](Graph& g, Node& out) {
                if (pa->needs_grad) g.grad_buffer(*pa) += out.grad.cwiseProduct(pb->value);
                if (pb->needs_grad) g.grad_buffer(*pb) += out.grad.cwiseProduct(pa->value);
              });
}

Var Graph::scale(Var a, double s) {
  Node& na = node(a);
  Node* pa = &na;
  return make(na.value * s, na.needs_grad, [pa, s](Graph& g, Node& out) {
    if (pa->needs_grad) g.grad_buffer(*pa) += out.grad * s;
  });
}

Var Graph::add_scalar(Var a, double s) {
  Node& na = node(a);
  Node* pa = &na;
  return make((na.value.array() + s).matrix(), na.needs_grad,
              [pa](Graph& g, Node& out) { g.accumulate(*pa, out.grad); });
}

Var Graph::matmul(Var a, Var b) {
  Node& na = node(a);
  Node& nb = node(b);
  SC_CHECK(na.value.cols() == nb.value.rows(), "matmul: inner dims %ld vs %ld",
           static_cast<long>(na.value.cols()), static_cast<long>(nb.value.rows()));
  Node* pa = &na;
  Node* pb = &nb;
  return make(na.value * nb.value, na.needs_grad || nb.needs_grad,
              [pa, pb](Graph& g, Node& out) {
                if (pa->needs_grad) g.grad_buffer(*pa).noalias() += out.grad * pb->value.transpose();
                if (pb->needs_grad) g.grad_buffer(*pb).noalias() += pa->value.transpose() * out.grad;
              });
}

Var Graph::add_col_broadcast(Var a, Var bias) {
  Node& na = node(a);
  Node& nb = node(bias);
  SC_CHECK(nb.value.cols() == 1 && nb.value.rows() == na.value.rows(),
           "add_col_broadcast: bias must be %ldx1", static_cast<long>(na.value.rows()));
  Node* pa = &na;
  Node* pb = &nb;
  return make(na.value.colwise() + nb.value.col(0), na.needs_grad || nb.needs_grad,
              [pa, pb](Graph& g, Node& out) {
                g.accumulate(*pa, out.grad);
                if (pb->needs_grad) g.grad_buffer(*pb) += out.grad.rowwise().sum();
              });
}

Var Graph::mul_row_broadcast(Var a, Var m) {
  Node& na = node(a);
  Node& nm = node(m);
  SC_CHECK(nm.value.rows() == 1 && nm.value.cols() == na.value.cols(),
           "mul_row_broadcast: multiplier must be 1x%ld", static_cast<long>(na.value.cols()));
  Node* pa = &na;
  Node* pm = &nm;
  Mat out = na.value.array().rowwise() * nm.value.row(0).array();
  return make(std::move(out), na.needs_grad || nm.needs_grad, [pa, pm](Graph& g, Node& o) {
    if (pa->needs_grad)
      g.grad_buffer(*pa) += (o.grad.array().rowwise() * pm->value.row(0).array()).matrix();
    if (pm->needs_grad)
      g.grad_buffer(*pm) += o.grad.cwiseProduct(pa->value).colwise().sum();
  });
}

Var Graph::tanh_(Var a) {
  Node& na = node(a);
  Node* pa = &na;
  Mat y = na.value.array().tanh();
  return make(std::move(y), na.needs_grad, [pa](Graph& g, Node& out) {
    if (pa->needs_grad)
      g.grad_buffer(*pa) +=
          out.grad.cwiseProduct((1.0 - out.value.array().square()).matrix());
  });
}

Var Graph::sigmoid_(Var a) {
  Node& na = node(a);
  Node* pa = &na;
  Mat y = (1.0 / (1.0 + (-na.value.array()).exp())).matrix();
  return make(std::move(y), na.needs_grad, [pa](Graph& g, Node& out) {
    if (pa->needs_grad)
      g.grad_buffer(*pa) +=
          out.grad.cwiseProduct((out.value.array() * (1.0 - out.value.array())).matrix());
  });
}

Var Graph::leaky_relu(Var a, double slope) {
  Node& na = node(a);
  Node* pa = &na;
  Mat y = na.value.array().max(na.value.array() * slope).matrix();
  return make(std::move(y), na.needs_grad, [pa, slope](Graph& g, Node& out) {
    if (!pa->needs_grad) return;
    Mat d = (pa->value.array() > 0.0).select(Mat::Ones(pa->value.rows(), pa->value.cols()),
                                             Mat::Constant(pa->value.rows(), pa->value.cols(), slope));
    g.grad_buffer(*pa) += out.grad.cwiseProduct(d);
  });
}

Var Graph::square(Var a) {
  Node& na = node(a);
  Node* pa = &na;
  return make(na.value.array().square().matrix(), na.needs_grad, [pa](Graph& g, Node& out) {
    if (pa->needs_grad) g.grad_buffer(*pa) += 2.0 * out.grad.cwiseProduct(pa->value);
  });
}

Var Graph::softmax_cols(Var scores) {
  Node& ns = node(scores);
  Node* ps = &ns;
  Mat y = ns.value;
  for (int c = 0; c < y.cols(); ++c) {
    double mx = y.col(c).maxCoeff();
    Eigen::ArrayXd e = (y.col(c).array() - mx).exp();
    y.col(c) = (e / e.sum()).matrix();
  }
  return make(std::move(y), ns.needs_grad, [ps](Graph& g, Node& out) {
    if (!ps->needs_grad) return;
    Mat& din = g.grad_buffer(*ps);
    for (int c = 0; c < out.value.cols(); ++c) {
      double dot = out.grad.col(c).dot(out.value.col(c));
      din.col(c) += out.value.col(c).cwiseProduct(out.grad.col(c) -
                                                  Mat::Constant(out.value.rows(), 1, dot));
    }
  });
}

Var Graph::cross_entropy_cols(Var logits, const std::vector<int>& ids) {
  Node& nl = node(logits);
  SC_CHECK(static_cast<long>(ids.size()) == nl.value.cols(),
           "cross_entropy_cols: %zu ids for %ld columns", ids.size(),
           static_cast<long>(nl.value.cols()));
  const int V = static_cast<int>(nl.value.rows());
  for (int id : ids) SC_CHECK(id >= 0 && id < V, "cross_entropy_cols: id %d out of range", id);

  Node* pl = &nl;
  Mat losses(1, nl.value.cols());
  Mat probs(nl.value.rows(), nl.value.cols());
  for (int c = 0; c < nl.value.cols(); ++c) {
    double mx = nl.value.col(c).maxCoeff();
    Eigen::ArrayXd e = (nl.value.col(c).array() - mx).exp();
    double z = e.sum();
    probs.col(c) = (e / z).matrix();
    losses(0, c) = -(nl.value(ids[static_cast<size_t>(c)], c) - mx - std::log(z));
  }
  auto ids_copy = ids;
  auto probs_holder = std::make_shared<Mat>(std::move(probs));
  return make(std::move(losses), nl.needs_grad,
              [pl, ids_copy, probs_holder](Graph& g, Node& out) {
                if (!pl->needs_grad) return;
                Mat& din = g.grad_buffer(*pl);
                for (int c = 0; c < out.value.cols(); ++c) {
                  din.col(c) += out.grad(0, c) * probs_holder->col(c);
                  din(ids_copy[static_cast<size_t>(c)], c) -= out.grad(0, c);
                }
              });
}

Var Graph::bce_with_logits(Var logits, const Mat& targets) {
  Node& nl = node(logits);
  SC_CHECK(nl.value.rows() == targets.rows() && nl.value.cols() == targets.cols(),
           "bce_with_logits: shape mismatch");
  Node* pl = &nl;
  // Stable form: max(x,0) - x*t + log(1 + exp(-|x|)).
  Mat x = nl.value;
  Mat loss = x.array().max(0.0) - x.array() * targets.array() +
             (1.0 + (-x.array().abs()).exp()).log();
  auto targets_holder = std::make_shared<Mat>(targets);
  return make(std::move(loss), nl.needs_grad, [pl, targets_holder](Graph& g, Node& out) {
    if (!pl->needs_grad) return;
    Mat sig = (1.0 / (1.0 + (-pl->value.array()).exp())).matrix();
    g.grad_buffer(*pl) += out.grad.cwiseProduct(sig - *targets_holder);
  });
}

Var Graph::sum(Var a) {
  Node& na = node(a);
  Node* pa = &na;
  Mat s(1, 1);
  s(0, 0) = na.value.sum();
  return make(std::move(s), na.needs_grad, [pa](Graph& g, Node& out) {
    if (pa->needs_grad)
      g.grad_buffer(*pa).array() += out.grad(0, 0);
  });
}

Var Graph::sum_cols(Var a) {
  Node& na = node(a);
  Node* pa = &na;
  Mat s = na.value.rowwise().sum();
  return make(std::move(s), na.needs_grad, [pa](Graph& g, Node& out) {
    if (pa->needs_grad) g.grad_buffer(*pa).colwise() += out.grad.col(0);
  });
}

Var Graph::mean(Var a) {
  Node& na = node(a);
  double inv = 1.0 / static_cast<double>(na.value.size());
  return scale(sum(a), inv);
}

Var Graph::concat_rows(const std::vector<Var>& parts) {
  SC_CHECK(!parts.empty(), "concat_rows: empty");
  long cols = node(parts[0]).value.cols();
  long rows = 0;
  bool needs = false;
  for (Var v : parts) {
    SC_CHECK(node(v).value.cols() == cols, "concat_rows: column mismatch");
    rows += node(v).value.rows();
    needs = needs || node(v).needs_grad;
  }
  Mat out(rows, cols);
  long r = 0;
  std::vector<Node*> srcs;
  for (Var v : parts) {
    Node& n = node(v);
    out.middleRows(r, n.value.rows()) = n.value;
    r += n.value.rows();
    srcs.push_back(&n);
  }
  return make(std::move(out), needs, [srcs](Graph& g, Node& o) {
    long rr = 0;
    for (Node* s : srcs) {
      if (s->needs_grad) g.grad_buffer(*s) += o.grad.middleRows(rr, s->value.rows());
      rr += s->value.rows();
    }
  });
}

Var Graph::concat_cols(const std::vector<Var>& parts) {
  SC_CHECK(!parts.empty(), "concat_cols: empty");
  long rows = node(parts[0]).value.rows();
  long cols = 0;
  bool needs = false;
  for (Var v : parts) {
    SC_CHECK(node(v).value.rows() == rows, "concat_cols: row mismatch");
    cols += node(v).value.cols();
    needs = needs || node(v).needs_grad;
  }
  Mat out(rows, cols);
  long c = 0;
  std::vector<Node*> srcs;
  for (Var v : parts) {
    Node& n = node(v);
    out.middleCols(c, n.value.cols()) = n.value;
    c += n.value.cols();
    srcs.push_back(&n);
  }
  return make(std::move(out), needs, [srcs](Graph& g, Node& o) {
    long cc = 0;
    for (Node* s : srcs) {
      if (s->needs_grad) g.grad_buffer(*s) += o.grad.middleCols(cc, s->value.cols());
      cc += s->value.cols();
    }
  });
}

Var Graph::slice_rows(Var a, int r0, int n) {
  Node& na = node(a);
  SC_CHECK(r0 >= 0 && n > 0 && r0 + n <= na.value.rows(), "slice_rows: [%d,%d) out of %ld", r0,
           r0 + n, static_cast<long>(na.value.rows()));
  Node* pa = &na;
  return make(na.value.middleRows(r0, n), na.needs_grad, [pa, r0, n](Graph& g, Node& out) {
    if (pa->needs_grad) g.grad_buffer(*pa).middleRows(r0, n) += out.grad;
  });
}

Var Graph::slice_cols(Var a, int c0, int n) {
  Node& na = node(a);
  SC_CHECK(c0 >= 0 && n > 0 && c0 + n <= na.value.cols(), "slice_cols: [%d,%d) out of %ld", c0,
           c0 + n, static_cast<long>(na.value.cols()));
  Node* pa = &na;
  return make(na.value.middleCols(c0, n), na.needs_grad, [pa, c0, n](Graph& g, Node& out) {
    if (pa->needs_grad) g.grad_buffer(*pa).middleCols(c0, n) += out.grad;
  });
}

Var Graph::gather_cols(Var table, const std::vector<int>& ids) {
  Node& nt = node(table);
  const int V = static_cast<int>(nt.value.cols());
  Mat out(nt.value.rows(), static_cast<long>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    SC_CHECK(ids[i] >= 0 && ids[i] < V, "gather_cols: id %d out of range [0,%d)", ids[i], V);
    out.col(static_cast<long>(i)) = nt.value.col(ids[i]);
  }
  Node* pt = &nt;
  auto ids_copy = ids;
  return make(std::move(out), nt.needs_grad, [pt, ids_copy](Graph& g, Node& o) {
    if (!pt->needs_grad) return;
    Mat& din = g.grad_buffer(*pt);
    for (std::size_t i = 0; i < ids_copy.size(); ++i)
      din.col(ids_copy[i]) += o.grad.col(static_cast<long>(i));
  });
}

Var Graph::dropout(Var a, double p) {
  if (!training_ || p <= 0.0) return a;
  SC_CHECK(rng_ != nullptr, "dropout requires a graph RNG in training mode");
  SC_CHECK(p < 1.0, "dropout probability must be < 1");
  Node& na = node(a);
  Mat mask(na.value.rows(), na.value.cols());
  const double keep = 1.0 - p;
  for (long c = 0; c < mask.cols(); ++c)
    for (long r = 0; r < mask.rows(); ++r)
      mask(r, c) = rng_->uniform_real() < keep ? 1.0 / keep : 0.0;
  Var m = constant(std::move(mask));
  return cmul(a, m);
}

Var Graph::im2col(Var a, int kernel, int stride, int pad) {
  Node& na = node(a);
  const long C = na.value.rows();
  const long T = na.value.cols();
  SC_CHECK(kernel >= 1 && stride >= 1 && pad >= 0, "im2col: bad geometry");
  const long t_out = (T + 2 * pad - kernel) / stride + 1;
  SC_CHECK(t_out >= 1, "im2col: output would be empty (T=%ld kernel=%d pad=%d)", T, kernel, pad);
  Mat out = Mat::Zero(C * kernel, t_out);
  for (long j = 0; j < t_out; ++j) {
    for (int k = 0; k < kernel; ++k) {
      long src = j * stride + k - pad;
      if (src < 0 || src >= T) continue;
      out.block(static_cast<long>(k) * C, j, C, 1) = na.value.col(src);
    }
  }
  Node* pa = &na;
  return make(std::move(out), na.needs_grad, [pa, kernel, stride, pad, C, T, t_out](Graph& g, Node& o) {
    if (!pa->needs_grad) return;
    Mat& din = g.grad_buffer(*pa);
    for (long j = 0; j < t_out; ++j) {
      for (int k = 0; k < kernel; ++k) {
        long src = j * stride + k - pad;
        if (src < 0 || src >= T) continue;
        din.col(src) += o.grad.block(static_cast<long>(k) * C, j, C, 1);
      }
    }
  });
}

Var Graph::maxpool_time(Var a, int width) {
  Node& na = node(a);
  const long C = na.value.rows();
  const long T = na.value.cols();
  SC_CHECK(width >= 1, "maxpool_time: width must be >= 1");
  Mat out(C, T);
  auto argmax = std::make_shared<std::vector<long>>(static_cast<std::size_t>(C * T));
  for (long j = 0; j < T; ++j) {
    for (long r = 0; r < C; ++r) {
      double best = na.value(r, j);
      long best_t = j;
      for (int k = 1; k < width; ++k) {
        if (j + k >= T) break;
        if (na.value(r, j + k) > best) {
          best = na.value(r, j + k);
          best_t = j + k;
        }
      }
      out(r, j) = best;
      (*argmax)[static_cast<std::size_t>(r * T + j)] = best_t;
    }
  }
  Node* pa = &na;
  return make(std::move(out), na.needs_grad, [pa, argmax, C, T](Graph& g, Node& o) {
    if (!pa->needs_grad) return;
    Mat& din = g.grad_buffer(*pa);
    for (long j = 0; j < T; ++j)
      for (long r = 0; r < C; ++r)
        din(r, (*argmax)[static_cast<std::size_t>(r * T + j)]) += o.grad(r, j);
  });
}

void Graph::backward(Var loss) {
  Node& l = node(loss);
  SC_CHECK(l.value.rows() == 1 && l.value.cols() == 1, "backward: loss must be 1x1");
  SC_CHECK(l.needs_grad, "backward: loss does not depend on any parameter");
  grad_buffer(l)(0, 0) = 1.0;

  for (long i = loss.idx; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.needs_grad || !n.grad_set) continue;
    if (n.back) n.back(*this, n);
    if (n.parameter) n.parameter->grad += n.grad;
  }
}

}  // namespace speechchain::nn
