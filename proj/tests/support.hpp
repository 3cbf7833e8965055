// Copyright 2026 The Faraday Filter Authors
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

#include <cmath>
#include <random>

#include "faraday/spin_algebra.hpp"

namespace faraday::testing {

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

/// Random full-rank density matrix (Wishart, unit trace).
inline Matrix random_density(int n, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, rng);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline Matrix random_hermitian(int n, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, rng);
  return 0.5 * (a + a.adjoint());
}

}  // namespace faraday::testing
