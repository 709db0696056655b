// Copyright 2026 The polyscot Authors. All rights reserved.
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "polyscot/core/error.hpp"

namespace polyscot::lora {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kInitStd = 0.02;

class RankTooLarge : public Error {
 public:
  RankTooLarge(long r, long d, long k)
      : Error("RankTooLarge: rank " + std::to_string(r) + " must satisfy 1 <= r < min(" + std::to_string(d) + ", " +
              std::to_string(k) + ")") {}
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Delta W = B A with A: r x k and B: d x r.
struct LoraAdapter {
  DenseMatrix A;
  DenseMatrix B;
  long rank = 0;
  double scale = 1.0;

  long d() const { return static_cast<long>(B.rows()); }
  long k() const { return static_cast<long>(A.cols()); }
};

// A ~ N(0, 0.02^2) from a seeded mt19937_64, B = 0.
inline LoraAdapter init_adapter(long d, long k, long r, std::uint64_t seed, double scale = 1.0) {
  if (d < 1 || k < 1 || r < 1 || r >= std::min(d, k)) throw RankTooLarge(r, d, k);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, kInitStd);
  LoraAdapter a;
  a.A.resize(r, k);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < k; ++j) a.A(i, j) = dist(gen);
  a.B = DenseMatrix::Zero(d, r);
  a.rank = r;
  a.scale = scale;
  return a;
}

inline void check_shapes(const LoraAdapter& a, const DenseMatrix& W0) {
  if (a.A.rows() != a.rank || a.B.cols() != a.rank)
    throw ShapeMismatch("adapter factors disagree with rank " + std::to_string(a.rank));
  if (W0.rows() != a.B.rows() || W0.cols() != a.A.cols())
    throw ShapeMismatch("W0 is " + std::to_string(W0.rows()) + "x" + std::to_string(W0.cols()) + ", adapter is " +
                        std::to_string(a.B.rows()) + "x" + std::to_string(a.A.cols()));
}

// W0 X + scale (B (A X)), in that association order.
inline DenseMatrix forward(const LoraAdapter& a, const DenseMatrix& W0, const DenseMatrix& X) {
  check_shapes(a, W0);
  if (X.rows() != W0.cols())
    throw ShapeMismatch("X has " + std::to_string(X.rows()) + " rows, W0 has " + std::to_string(W0.cols()) + " columns");
  DenseMatrix H = W0 * X;
  DenseMatrix AX = a.A * X;
  DenseMatrix BAX = a.B * AX;
  return H + a.scale * BAX;
}

// W0 + scale B A.
inline DenseMatrix merge(const LoraAdapter& a, const DenseMatrix& W0) {
  check_shapes(a, W0);
  DenseMatrix BA = a.B * a.A;
  return W0 + a.scale * BA;
}

struct Hyperparams {
  std::string optimizer = "AdamW";
  double lr = 2e-4;
  int lora_r = 32;
  int lora_alpha = 16;
  int max_in = 512;
  int max_out = 512;
  int seed = 42;
  int batch = 1;
};

inline Hyperparams reference_hyperparams() { return {}; }

inline nlohmann::json to_json(const Hyperparams& h) {
  return {{"optimizer", h.optimizer}, {"lr", h.lr},         {"lora_r", h.lora_r},   {"lora_alpha", h.lora_alpha},
          {"max_in", h.max_in},       {"max_out", h.max_out}, {"seed", h.seed}, {"batch", h.batch}};
}

}  // namespace polyscot::lora
