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

#include "faraday/ito_calculus.hpp"

#include <cmath>
#include <numbers>

#include "faraday/error.hpp"

namespace faraday::ito {
namespace {

using Basis2 = Eigen::Matrix2cd;

int idx(Increment inc) { return static_cast<int>(inc); }

// Column a holds the xy components of the a-th vector of the target basis.
Basis2 basis_vectors(ChannelBasis basis) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  Basis2 c;
  switch (basis) {
    case ChannelBasis::xy:
      c.setIdentity();
      break;
    case ChannelBasis::circular:
      // e_+ = -(e_x + i e_y)/sqrt2, e_- = (e_x - i e_y)/sqrt2
      c << -r, r, -i * r, -i * r;
      break;
    case ChannelBasis::xi_eta:
      c << r, r, r, -r;
      break;
  }
  return c;
}

}  // namespace

Increment annihilation(int channel) { return static_cast<Increment>(idx(Increment::annihilation_x) + channel); }
Increment creation(int channel) { return static_cast<Increment>(idx(Increment::creation_x) + channel); }
Increment gauge(int row, int col) { return static_cast<Increment>(idx(Increment::gauge_xx) + 2 * row + col); }

ChannelBasis parse_basis(std::string_view name) {
  if (name == "xy") return ChannelBasis::xy;
  if (name == "circular" || name == "+-") return ChannelBasis::circular;
  if (name == "xi_eta" || name == "xieta" || name == "xi-eta") return ChannelBasis::xi_eta;
  throw DomainError("unknown channel basis '" + std::string(name) + "' (expected xy, circular or xi_eta)");
}

std::string_view basis_name(ChannelBasis basis) {
  switch (basis) {
    case ChannelBasis::xy: return "xy";
    case ChannelBasis::circular: return "circular";
    case ChannelBasis::xi_eta: return "xi_eta";
  }
  return "?";
}

std::array<std::string_view, 2> channel_labels(ChannelBasis basis) {
  switch (basis) {
    case ChannelBasis::xy: return {"x", "y"};
    case ChannelBasis::circular: return {"+", "-"};
    case ChannelBasis::xi_eta: return {"xi", "eta"};
  }
  return {"?", "?"};
}

std::string increment_label(Increment inc, ChannelBasis basis) {
  const auto labels = channel_labels(basis);
  const int k = idx(inc);
  if (inc == Increment::dt) return "dt";
  if (k <= idx(Increment::annihilation_y)) return "dA^" + std::string(labels[k - 1]);
  if (k <= idx(Increment::creation_y)) return "dA*^" + std::string(labels[k - 3]);
  const int g = k - idx(Increment::gauge_xx);
  const std::string_view sep = (basis == ChannelBasis::xi_eta) ? " " : "";
  return "dLambda^" + std::string(labels[g / 2]) + std::string(sep) + std::string(labels[g % 2]);
}

QNoiseExpr::QNoiseExpr(int dim, double t, Complex drive) : dim_(dim), t_(t), drive_(drive) {
  if (dim < 1) throw DomainError("QNoiseExpr: dimension must be positive");
  for (auto& c : coeff_) c = SpinOperator::Zero(dim, dim);
}

QNoiseExpr& QNoiseExpr::add(Increment inc, const SpinOperator& c) {
  if (c.rows() != dim_ || c.cols() != dim_) throw DomainError("QNoiseExpr: coefficient dimension mismatch");
  coeff_[idx(inc)] += c;
  return *this;
}

QNoiseExpr& QNoiseExpr::add(Increment inc, Complex scalar) {
  coeff_[idx(inc)].diagonal().array() += scalar;
  return *this;
}

QNoiseExpr QNoiseExpr::operator+(const QNoiseExpr& other) const {
  if (other.dim_ != dim_) throw DomainError("QNoiseExpr: dimension mismatch");
  QNoiseExpr out = *this;
  for (int k = 0; k < kIncrementCount; ++k) out.coeff_[k] += other.coeff_[k];
  return out;
}

QNoiseExpr QNoiseExpr::operator-(const QNoiseExpr& other) const { return *this + other * Complex(-1.0); }

QNoiseExpr QNoiseExpr::operator*(Complex scalar) const {
  QNoiseExpr out = *this;
  for (auto& c : out.coeff_) c *= scalar;
  return out;
}

QNoiseExpr QNoiseExpr::adjoint() const {
  QNoiseExpr out(dim_, t_, drive_);
  out[Increment::dt] = (*this)[Increment::dt].adjoint();
  for (int i = 0; i < 2; ++i) {
    out[creation(i)] = (*this)[annihilation(i)].adjoint();
    out[annihilation(i)] = (*this)[creation(i)].adjoint();
    for (int j = 0; j < 2; ++j) out[gauge(j, i)] = (*this)[gauge(i, j)].adjoint();
  }
  return out;
}

double QNoiseExpr::norm(Increment inc) const { return coeff_[idx(inc)].norm(); }

double QNoiseExpr::max_norm() const {
  double m = 0.0;
  for (const auto& c : coeff_) m = std::max(m, c.norm());
  return m;
}

QNoiseExpr ito_product(const QNoiseExpr& x, const QNoiseExpr& y) {
  if (x.dim() != y.dim()) throw DomainError("ito_product: dimension mismatch");
  QNoiseExpr out(x.dim(), x.time(), x.drive());
  for (int k = 0; k < 2; ++k) {
    // dA^k dA^{k*} = dt
    out[Increment::dt] += x[annihilation(k)] * y[creation(k)];
    for (int j = 0; j < 2; ++j) {
      // dA^k dLambda^{kj} = dA^j
      out[annihilation(j)] += x[annihilation(k)] * y[gauge(k, j)];
    }
    for (int l = 0; l < 2; ++l) {
      // dLambda^{kl} dA^{l*} = dA^{k*}
      out[creation(k)] += x[gauge(k, l)] * y[creation(l)];
      for (int j = 0; j < 2; ++j) {
        // dLambda^{kl} dLambda^{lj} = dLambda^{kj}
        out[gauge(k, j)] += x[gauge(k, l)] * y[gauge(l, j)];
      }
    }
  }
  return out;
}

BasisView BasisView::zero(ChannelBasis basis, int dim) {
  BasisView v;
  v.basis = basis;
  const SpinOperator z = SpinOperator::Zero(dim, dim);
  v.time = z;
  v.annihilation = {z, z};
  v.creation = {z, z};
  v.gauge = {{{z, z}, {z, z}}};
  return v;
}

BasisView basis_change(const QNoiseExpr& expr, ChannelBasis target) {
  const Basis2 c = basis_vectors(target);
  BasisView v = BasisView::zero(target, expr.dim());
  v.time = expr[Increment::dt];
  for (int a = 0; a < 2; ++a) {
    for (int j = 0; j < 2; ++j) {
      v.annihilation[a] += std::conj(c(j, a)) * expr[annihilation(j)];
      v.creation[a] += c(j, a) * expr[creation(j)];
    }
    for (int b = 0; b < 2; ++b) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) v.gauge[a][b] += c(i, a) * std::conj(c(j, b)) * expr[gauge(i, j)];
      }
    }
  }
  return v;
}

BasisView basis_change(const QNoiseExpr& expr, std::string_view target) {
  return basis_change(expr, parse_basis(target));
}

QNoiseExpr from_view(const BasisView& view, double t, Complex drive) {
  const Basis2 c = basis_vectors(view.basis);
  QNoiseExpr out(static_cast<int>(view.time.rows()), t, drive);
  out[Increment::dt] = view.time;
  for (int j = 0; j < 2; ++j) {
    for (int a = 0; a < 2; ++a) {
      out[annihilation(j)] += c(j, a) * view.annihilation[a];
      out[creation(j)] += std::conj(c(j, a)) * view.creation[a];
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) out[gauge(i, j)] += std::conj(c(i, a)) * c(j, b) * view.gauge[a][b];
      }
    }
  }
  return out;
}

Generator parse_generator(std::string_view name) {
  if (name == "U0") return Generator::U0;
  if (name == "U") return Generator::U;
  if (name == "Uprime") return Generator::Uprime;
  if (name == "Weyl") return Generator::Weyl;
  if (name == "WeylAdjoint") return Generator::WeylAdjoint;
  if (name == "Vprime") return Generator::Vprime;
  if (name == "V") return Generator::V;
  if (name == "Ubar") return Generator::Ubar;
  throw DomainError("unknown QSDE name '" + std::string(name) + "'");
}

std::string_view generator_name(Generator g) {
  switch (g) {
    case Generator::U0: return "U0";
    case Generator::U: return "U";
    case Generator::Uprime: return "Uprime";
    case Generator::Weyl: return "Weyl";
    case Generator::WeylAdjoint: return "WeylAdjoint";
    case Generator::Vprime: return "Vprime";
    case Generator::V: return "V";
    case Generator::Ubar: return "Ubar";
  }
  return "?";
}

namespace {

// Direct scattering part shared by U0, U and Uprime, written in the circular
// basis where it is diagonal and converted to xy.
QNoiseExpr faraday_scattering(const ModelParams& p, double t) {
  const RealVector fz = p.space.fz_diagonal();
  const int n = p.space.dim();
  const Complex i(0.0, 1.0);
  BasisView view = BasisView::zero(ito::ChannelBasis::circular, n);
  const Eigen::VectorXcd plus = (i * p.kappa * fz.cast<Complex>()).array().exp() - 1.0;
  const Eigen::VectorXcd minus = (-i * p.kappa * fz.cast<Complex>()).array().exp() - 1.0;
  view.gauge[0][0] = plus.asDiagonal();
  view.gauge[1][1] = minus.asDiagonal();
  return from_view(view, t, p.drive(t));
}

// dZ^xi or dZ^eta from the Holevo change of picture.
QNoiseExpr count_output(const ModelParams& p, double t, int channel) {
  const int n = p.space.dim();
  const Complex f = p.drive(t);
  const double sign = channel == 0 ? 1.0 : -1.0;
  BasisView view = BasisView::zero(ChannelBasis::xi_eta, n);
  view.gauge[channel][channel] = SpinOperator::Identity(n, n);
  QNoiseExpr z = from_view(view, t, f);
  z.add(Increment::annihilation_x, 0.5 * std::conj(f));
  z.add(Increment::annihilation_y, 0.5 * sign * std::conj(f));
  z.add(Increment::creation_x, 0.5 * f);
  z.add(Increment::creation_y, 0.5 * sign * f);
  z.add(Increment::dt, 0.5 * std::norm(f));
  return z;
}

QNoiseExpr scaled(const SpinOperator& c, const QNoiseExpr& e) {
  QNoiseExpr out(e.dim(), e.time(), e.drive());
  for (int k = 0; k < kIncrementCount; ++k) {
    const auto inc = static_cast<Increment>(k);
    out[inc] = c * e[inc];
  }
  return out;
}

}  // namespace

QNoiseExpr qsde_coefficients(Generator name, const ModelParams& p, double t) {
  if (!(t >= 0.0)) throw DomainError("qsde_coefficients: t must be >= 0");
  const int n = p.space.dim();
  const Complex f = p.drive(t);
  const double f2 = std::norm(f);
  const RealVector fz = p.space.fz_diagonal();
  const SpinOperator id = SpinOperator::Identity(n, n);
  const SpinOperator cos_k = (p.kappa * fz).array().cos().matrix().cast<Complex>().asDiagonal();
  const SpinOperator sin_k = (p.kappa * fz).array().sin().matrix().cast<Complex>().asDiagonal();

  QNoiseExpr g(n, t, f);
  switch (name) {
    case Generator::U0:
      return faraday_scattering(p, t);
    case Generator::Weyl:
      g.add(Increment::creation_x, f).add(Increment::annihilation_x, -std::conj(f)).add(Increment::dt, -0.5 * f2);
      return g;
    case Generator::WeylAdjoint:
      g.add(Increment::annihilation_x, std::conj(f)).add(Increment::creation_x, -f).add(Increment::dt, -0.5 * f2);
      return g;
    case Generator::U:
      g = faraday_scattering(p, t);
      g.add(Increment::creation_x, f * cos_k);
      g.add(Increment::annihilation_x, -std::conj(f));
      g.add(Increment::creation_y, f * sin_k);
      g.add(Increment::dt, -0.5 * f2);
      return g;
    case Generator::Uprime:
      g = faraday_scattering(p, t);
      g.add(Increment::creation_x, f * (cos_k - id));
      g.add(Increment::annihilation_x, std::conj(f) * (cos_k - id));
      g.add(Increment::creation_y, f * sin_k);
      g.add(Increment::annihilation_y, -std::conj(f) * sin_k);
      g.add(Increment::dt, f2 * (cos_k - id));
      return g;
    case Generator::Vprime:
      return scaled(cos_k + sin_k - id, count_output(p, t, 0)) + scaled(cos_k - sin_k - id, count_output(p, t, 1));
    case Generator::V: {
      const double a = p.alpha_at(t);
      const Complex phase = std::polar(1.0, p.phi);
      g.add(Increment::creation_x, phase * a * cos_k);
      g.add(Increment::annihilation_y, std::conj(phase) * a * sin_k);
      g.add(Increment::creation_y, phase * a * sin_k);
      g.add(Increment::dt, -0.5 * a * a);
      return g;
    }
    case Generator::Ubar: {
      const double sqrt_m = std::sqrt(p.measurement_strength);
      const Complex phase = std::polar(1.0, p.phi);
      const SpinOperator fz_op = fz.cast<Complex>().asDiagonal();
      const SpinOperator l = -sqrt_m * phase * fz_op;
      g.add(Increment::annihilation_y, -l.adjoint());
      g.add(Increment::creation_y, l);
      g.add(Increment::dt, -0.5 * (l.adjoint() * l));
      return g;
    }
  }
  throw DomainError("qsde_coefficients: unknown generator");
}

QNoiseExpr qsde_coefficients(std::string_view name, const ModelParams& params, double t) {
  return qsde_coefficients(parse_generator(name), params, t);
}

QNoiseExpr unitarity_defect(const QNoiseExpr& g) {
  const QNoiseExpr gd = g.adjoint();
  return g + gd + ito_product(gd, g);
}

QNoiseExpr qsde_product(const QNoiseExpr& g1, const QNoiseExpr& g2) { return g1 + g2 + ito_product(g1, g2); }

}  // namespace faraday::ito
