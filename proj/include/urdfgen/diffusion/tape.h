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


#ifndef URDFGEN_DIFFUSION_TAPE_H_
#define URDFGEN_DIFFUSION_TAPE_H_

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace urdfgen::ad {

using Matrix = Eigen::MatrixXd;

struct Var {
  int id = -1;
};

// Reverse-mode differentiation over dense matrices. Every op appends a node;
// backward() walks the nodes in reverse and finally adds the gradients of
// parameter leaves into their sinks. Row vectors (1 x n) play the role of
// per-channel broadcasts and scalars are 1 x 1.
class Tape {
 public:
  Var constant(Matrix value);
  // Leaf that refers to `value` without copying; its gradient is added to
  // *sink (same shape) by backward(). A null sink makes it a constant.
  Var parameter(const Matrix& value, Matrix* sink);

  const Matrix& value(Var v) const;
  double scalar(Var v) const { return value(v)(0, 0); }
  // Seeds d(out)/d(out) = 1 for a 1 x 1 output.
  void backward(Var out);
  int size() const { return static_cast<int>(nodes_.size()); }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);          // elementwise
  Var scale(Var a, double s);
  Var add_const(Var a, double c);
  Var add_row(Var a, Var row);    // a + broadcast(row)
  Var mul_row(Var a, Var row);    // a .* broadcast(row)
  Var linear(Var x, Var w, Var b) { return add_row(matmul(x, w), b); }

  Var silu(Var a);
  Var gelu(Var a);  // tanh approximation
  Var layer_norm(Var a, double eps = 1e-6);  // per row, no affine part
  // Multi-head scaled dot-product attention. q: n x w, k and v: m x w, with
  // w divisible by heads. Returns n x w (heads concatenated by column).
  Var attention(Var q, Var k, Var v, int heads);

  Var concat_rows(const std::vector<Var>& parts);
  Var slice_cols(Var a, int start, int count);

  // Per column: mean, mean of squares, and smooth max / min
  // (log-mean-exp at sharpness beta). Output 1 x 4c.
  Var token_stats(Var a, double beta);

  Var mean_square(Var a);  // 1 x 1
  Var sum_abs(Var a);      // 1 x 1
  Var normalize(Var row);  // row / |row|
  // r - (r . a) a for rows r and a.
  Var reject(Var r, Var a);
  // -log softmax(logits)[label] for a 1 x k row.
  Var cross_entropy(Var logits, int label);

 private:
  struct Node {
    Matrix own;
    const Matrix* ref = nullptr;
    Matrix grad;
    Matrix* sink = nullptr;
    bool requires_grad = false;
    std::function<void()> backward;
  };

  Var push(Matrix value, std::initializer_list<Var> inputs);
  bool needs(Var v) const { return nodes_[v.id].requires_grad; }
  Matrix& grad(Var v);

  std::vector<Node> nodes_;
};

}  // namespace urdfgen::ad

#endif  // URDFGEN_DIFFUSION_TAPE_H_
