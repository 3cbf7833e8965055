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

// Unconditional dynamics: Lindblad generators in Heisenberg form (acting on
// observables) and in Schrodinger form (acting on states), plus a fixed-step
// master equation integrator.

#include <string_view>
#include <vector>

#include "faraday/model.hpp"
#include "faraday/spin_algebra.hpp"

namespace faraday {

enum class GeneratorKind { finite_alpha, limit };

GeneratorKind parse_generator_kind(std::string_view name);
std::string_view generator_kind_name(GeneratorKind kind);

/// |f(t)|^2 (S X S + C X C - X) + i gamma_b [F_y, X], with S = sin(kappa F_z)
/// and C = cos(kappa F_z).
SpinOperator lindblad_heisenberg(const SpinOperator& x, const ModelParams& params, double t);

/// Pre-adjoint of lindblad_heisenberg: tr(L*(rho) X) = tr(rho L(X)).
Matrix lindblad_schrodinger(const Matrix& rho, const ModelParams& params, double t);

/// M (F_z X F_z - (F_z^2 X + X F_z^2) / 2) + i gamma_b [F_y, X].
SpinOperator limit_lindblad_heisenberg(const SpinOperator& x, const ModelParams& params);

/// Pre-adjoint of limit_lindblad_heisenberg.
Matrix limit_lindblad_schrodinger(const Matrix& rho, const ModelParams& params);

/// Schrodinger-picture generator of the chosen kind.
Matrix apply_generator(GeneratorKind kind, const Matrix& rho, const ModelParams& params, double t);

/// Integrates d rho / dt = L*(rho) with classical RK4 on the grid
/// t_k = k dt, k = 0..steps. Returns steps + 1 states. Throws StepRejected if
/// an eigenvalue falls below -kPositivityFloor; smaller excursions are
/// clipped and the trace restored.
std::vector<DensityState> master_evolve(const DensityState& rho0, const ModelParams& params, GeneratorKind kind);

}  // namespace faraday
