// Copyright 2026 The urdfgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "urdfgen/diffusion/tape.h"

#include <cmath>
#include <string>

#include "urdfgen/common/error.h"

namespace urdfgen::ad {
namespace {

void check(bool ok, const char* op) {
  if (!ok) throw InvalidArgument(std::string("tape: shape mismatch in ") + op);
}

constexpr double kGeluScale = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluCubic = 0.044715;

}  // namespace

Var Tape::push(Matrix value, std::initializer_list<Var> inputs) {
  Node node;
  node.own = std::move(value);
  for (Var v : inputs) node.requires_grad = node.requires_grad || nodes_[v.id].requires_grad;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Matrix& Tape::grad(Var v) {
  Node& n = nodes_[v.id];
  if (n.grad.size() == 0) n.grad = Matrix::Zero(value(v).rows(), value(v).cols());
  return n.grad;
}

const Matrix& Tape::value(Var v) const {
  const Node& n = nodes_[v.id];
  return n.ref ? *n.ref : n.own;
}

Var Tape::constant(Matrix value) { return push(std::move(value), {}); }

Var Tape::parameter(const Matrix& value, Matrix* sink) {
  Node node;
  node.ref = &value;
  node.sink = sink;
  node.requires_grad = sink != nullptr;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

void Tape::backward(Var out) {
  check(value(out).size() == 1, "backward");
  grad(out)(0, 0) += 1.0;
  for (int i = out.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.backward) n.backward();
    if (n.sink) *nodes_[i].sink += nodes_[i].grad;
  }
}

Var Tape::matmul(Var a, Var b) {
  check(value(a).cols() == value(b).rows(), "matmul");
  Var c = push(value(a) * value(b), {a, b});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, b, c] {
      const Matrix& g = nodes_[c.id].grad;
      if (needs(a)) grad(a).noalias() += g * value(b).transpose();
      if (needs(b)) grad(b).noalias() += value(a).transpose() * g;
    };
  }
  return c;
}

Var Tape::add(Var a, Var b) {
  check(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(), "add");
  Var c = push(value(a) + value(b), {a, b});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, b, c] {
      const Matrix& g = nodes_[c.id].grad;
      if (needs(a)) grad(a) += g;
      if (needs(b)) grad(b) += g;
    };
  }
  return c;
}

Var Tape::sub(Var a, Var b) {
  check(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(), "sub");
  Var c = push(value(a) - value(b), {a, b});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, b, c] {
      const Matrix& g = nodes_[c.id].grad;
      if (needs(a)) grad(a) += g;
      if (needs(b)) grad(b) -= g;
    };
  }
  return c;
}

Var Tape::mul(Var a, Var b) {
  check(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(), "mul");
  Var c = push(value(a).cwiseProduct(value(b)), {a, b});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, b, c] {
      const Matrix& g = nodes_[c.id].grad;
      if (needs(a)) grad(a) += g.cwiseProduct(value(b));
      if (needs(b)) grad(b) += g.cwiseProduct(value(a));
    };
  }
  return c;
}

Var Tape::scale(Var a, double s) {
  Var c = push(value(a) * s, {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c, s] { grad(a) += s * nodes_[c.id].grad; };
  }
  return c;
}

Var Tape::add_const(Var a, double k) {
  Var c = push(value(a).array() + k, {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c] { grad(a) += nodes_[c.id].grad; };
  }
  return c;
}

Var Tape::add_row(Var a, Var row) {
  check(value(row).rows() == 1 && value(row).cols() == value(a).cols(), "add_row");
  Matrix out = value(a);
  out.rowwise() += value(row).row(0);
  Var c = push(std::move(out), {a, row});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, row, c] {
      const Matrix& g = nodes_[c.id].grad;
      if (needs(a)) grad(a) += g;
      if (needs(row)) grad(row) += g.colwise().sum();
    };
  }
  return c;
}

Var Tape::mul_row(Var a, Var row) {
  check(value(row).rows() == 1 && value(row).cols() == value(a).cols(), "mul_row");
  Matrix out = value(a);
  out.array().rowwise() *= value(row).row(0).array();
  Var c = push(std::move(out), {a, row});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, row, c] {
      const Matrix& g = nodes_[c.id].grad;
      if (needs(a)) {
        Matrix ga = g;
        ga.array().rowwise() *= value(row).row(0).array();
        grad(a) += ga;
      }
      if (needs(row)) grad(row) += g.cwiseProduct(value(a)).colwise().sum();
    };
  }
  return c;
}

Var Tape::silu(Var a) {
  const Matrix& x = value(a);
  const Matrix sig = (1.0 + (-x.array()).exp()).inverse().matrix();
  Var c = push(x.cwiseProduct(sig), {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c, sig] {
      const auto& xa = value(a).array();
      const auto s = sig.array();
      grad(a).array() += nodes_[c.id].grad.array() * (s + xa * s * (1.0 - s));
    };
  }
  return c;
}

Var Tape::gelu(Var a) {
  const auto x = value(a).array();
  const Matrix th = (kGeluScale * (x + kGeluCubic * x.cube())).tanh().matrix();
  Var c = push((0.5 * x * (1.0 + th.array())).matrix(), {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c, th] {
      const auto xa = value(a).array();
      const auto t = th.array();
      const auto d = 0.5 * (1.0 + t) + 0.5 * xa * (1.0 - t * t) * kGeluScale * (1.0 + 3.0 * kGeluCubic * xa * xa);
      grad(a).array() += nodes_[c.id].grad.array() * d;
    };
  }
  return c;
}

Var Tape::layer_norm(Var a, double eps) {
  const Matrix& x = value(a);
  const Eigen::Index n = x.cols();
  Eigen::VectorXd inv(x.rows());
  Matrix y(x.rows(), n);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mu = x.row(r).mean();
    const double var = (x.row(r).array() - mu).square().mean();
    inv(r) = 1.0 / std::sqrt(var + eps);
    y.row(r) = (x.row(r).array() - mu) * inv(r);
  }
  Var c = push(y, {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c, inv] {
      const Matrix& g = nodes_[c.id].grad;
      const Matrix& y = value(c);
      Matrix& ga = grad(a);
      for (Eigen::Index r = 0; r < g.rows(); ++r) {
        const double mg = g.row(r).mean();
        const double mgy = g.row(r).dot(y.row(r)) / static_cast<double>(g.cols());
        ga.row(r).array() += inv(r) * (g.row(r).array() - mg - y.row(r).array() * mgy);
      }
    };
  }
  return c;
}

Var Tape::attention(Var q, Var k, Var v, int heads) {
  const Matrix& Q = value(q);
  const Matrix& K = value(k);
  const Matrix& V = value(v);
  check(Q.cols() == K.cols() && K.cols() == V.cols() && K.rows() == V.rows() && heads > 0 &&
            Q.cols() % heads == 0,
        "attention");
  const int d = static_cast<int>(Q.cols()) / heads;
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Matrix> probs(heads);
  Matrix out(Q.rows(), Q.cols());
  for (int h = 0; h < heads; ++h) {
    Matrix S = s * (Q.middleCols(h * d, d) * K.middleCols(h * d, d).transpose());
    for (Eigen::Index r = 0; r < S.rows(); ++r) {
      const double mx = S.row(r).maxCoeff();
      S.row(r) = (S.row(r).array() - mx).exp();
      S.row(r) /= S.row(r).sum();
    }
    out.middleCols(h * d, d).noalias() = S * V.middleCols(h * d, d);
    probs[h] = std::move(S);
  }
  Var c = push(std::move(out), {q, k, v});
  if (needs(c)) {
    nodes_[c.id].backward = [this, q, k, v, c, probs = std::move(probs), heads, d, s] {
      const Matrix& g = nodes_[c.id].grad;
      for (int h = 0; h < heads; ++h) {
        const Matrix& P = probs[h];
        const auto gh = g.middleCols(h * d, d);
        if (needs(v)) grad(v).middleCols(h * d, d).noalias() += P.transpose() * gh;
        if (!needs(q) && !needs(k)) continue;
        Matrix dP = gh * value(v).middleCols(h * d, d).transpose();
        const Eigen::VectorXd rs = dP.cwiseProduct(P).rowwise().sum();
        Matrix dS = P.cwiseProduct(dP.colwise() - rs);
        if (needs(q)) grad(q).middleCols(h * d, d).noalias() += s * dS * value(k).middleCols(h * d, d);
        if (needs(k)) grad(k).middleCols(h * d, d).noalias() += s * dS.transpose() * value(q).middleCols(h * d, d);
      }
    };
  }
  return c;
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
  check(!parts.empty(), "concat_rows");
  Eigen::Index rows = 0;
  const Eigen::Index cols = value(parts[0]).cols();
  for (Var p : parts) {
    check(value(p).cols() == cols, "concat_rows");
    rows += value(p).rows();
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  bool req = false;
  for (Var p : parts) {
    out.middleRows(at, value(p).rows()) = value(p);
    at += value(p).rows();
    req = req || needs(p);
  }
  Var c = push(std::move(out), {});
  nodes_[c.id].requires_grad = req;
  if (req) {
    nodes_[c.id].backward = [this, parts, c] {
      const Matrix& g = nodes_[c.id].grad;
      Eigen::Index at = 0;
      for (Var p : parts) {
        const Eigen::Index r = value(p).rows();
        if (needs(p)) grad(p) += g.middleRows(at, r);
        at += r;
      }
    };
  }
  return c;
}

Var Tape::slice_cols(Var a, int start, int count) {
  check(start >= 0 && count >= 0 && start + count <= value(a).cols(), "slice_cols");
  Var c = push(value(a).middleCols(start, count), {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c, start, count] {
      grad(a).middleCols(start, count) += nodes_[c.id].grad;
    };
  }
  return c;
}

Var Tape::token_stats(Var a, double beta) {
  const Matrix& x = value(a);
  const Eigen::Index n = x.rows(), w = x.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix out(1, 4 * w);
  Matrix soft_max(n, w), soft_min(n, w);
  for (Eigen::Index j = 0; j < w; ++j) {
    const auto col = x.col(j).array();
    out(0, j) = col.mean();
    out(0, w + j) = col.square().mean();
    const double hi = col.maxCoeff(), lo = col.minCoeff();
    const Eigen::ArrayXd ep = (beta * (col - hi)).exp();
    const Eigen::ArrayXd em = (-beta * (col - lo)).exp();
    out(0, 2 * w + j) = hi + std::log(ep.sum() * inv_n) / beta;
    out(0, 3 * w + j) = lo - std::log(em.sum() * inv_n) / beta;
    soft_max.col(j) = (ep / ep.sum()).matrix();
    soft_min.col(j) = (em / em.sum()).matrix();
  }
  Var c = push(std::move(out), {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c, soft_max, soft_min, w, inv_n] {
      const Matrix& g = nodes_[c.id].grad;
      const Matrix& x = value(a);
      Matrix& ga = grad(a);
      for (Eigen::Index j = 0; j < w; ++j) {
        ga.col(j).array() += g(0, j) * inv_n + g(0, w + j) * 2.0 * inv_n * x.col(j).array() +
                             g(0, 2 * w + j) * soft_max.col(j).array() +
                             g(0, 3 * w + j) * soft_min.col(j).array();
      }
    };
  }
  return c;
}

Var Tape::mean_square(Var a) {
  const double n = static_cast<double>(value(a).size());
  Matrix out(1, 1);
  out(0, 0) = value(a).squaredNorm() / n;
  Var c = push(std::move(out), {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c, n] { grad(a) += (2.0 * nodes_[c.id].grad(0, 0) / n) * value(a); };
  }
  return c;
}

Var Tape::sum_abs(Var a) {
  Matrix out(1, 1);
  out(0, 0) = value(a).cwiseAbs().sum();
  Var c = push(std::move(out), {a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, a, c] {
      grad(a) += nodes_[c.id].grad(0, 0) * value(a).unaryExpr([](double x) {
        return static_cast<double>((x > 0) - (x < 0));
      });
    };
  }
  return c;
}

Var Tape::normalize(Var row) {
  check(value(row).rows() == 1, "normalize");
  const double len = value(row).norm();
  if (!(len > 0)) throw InvalidArgument("tape: normalize of a zero vector");
  Var c = push(value(row) / len, {row});
  if (needs(c)) {
    nodes_[c.id].backward = [this, row, c, len] {
      const Matrix& g = nodes_[c.id].grad;
      const Matrix& y = value(c);
      grad(row) += (g - y * y.row(0).dot(g.row(0))) / len;
    };
  }
  return c;
}

Var Tape::reject(Var r, Var a) {
  check(value(r).rows() == 1 && value(a).rows() == 1 && value(r).cols() == value(a).cols(), "reject");
  const double ra = value(r).row(0).dot(value(a).row(0));
  Var c = push(value(r) - ra * value(a), {r, a});
  if (needs(c)) {
    nodes_[c.id].backward = [this, r, a, c, ra] {
      const Matrix& g = nodes_[c.id].grad;
      const double ag = value(a).row(0).dot(g.row(0));
      if (needs(r)) grad(r) += g - ag * value(a);
      if (needs(a)) grad(a) -= ra * g + ag * value(r);
    };
  }
  return c;
}

Var Tape::cross_entropy(Var logits, int label) {
  const Matrix& z = value(logits);
  check(z.rows() == 1 && label >= 0 && label < z.cols(), "cross_entropy");
  const double mx = z.maxCoeff();
  const Eigen::RowVectorXd e = (z.row(0).array() - mx).exp().matrix();
  const double sum = e.sum();
  Matrix out(1, 1);
  out(0, 0) = mx + std::log(sum) - z(0, label);
  Var c = push(std::move(out), {logits});
  if (needs(c)) {
    nodes_[c.id].backward = [this, logits, c, e, sum, label] {
      Matrix d = e / sum;
      d(0, label) -= 1.0;
      grad(logits) += nodes_[c.id].grad(0, 0) * d;
    };
  }
  return c;
}

}  // namespace urdfgen::ad
