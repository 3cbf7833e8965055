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

#include "faraday/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "faraday/error.hpp"

namespace faraday {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_distribution(const RealVector& p, const SpinSpace& space) {
  if (p.size() != space.dim()) throw DomainError("charfunc: p must have 2J+1 entries");
  if ((p.array() < -1e-12).any() || std::abs(p.sum() - 1.0) > 1e-9) {
    throw DomainError("charfunc: p must be a probability vector");
  }
}

// Sum_m p_m exp(int_0^t g_m(k(s)) ds).
template <typename G>
Complex mixture(const TestFunction& k, const SpinSpace& space, const RealVector& p, double t, G&& g) {
  Complex acc = 0.0;
  for (int i = 0; i < space.dim(); ++i) {
    if (p[i] == 0.0) continue;
    const double m = space.m(i);
    const double re = k.integrate([&](double kv) { return g(kv, m).real(); }, t);
    const double im = k.integrate([&](double kv) { return g(kv, m).imag(); }, t);
    acc += p[i] * std::exp(Complex(re, im));
  }
  return acc;
}

template <typename F>
CharFunc sweep(Process process, const std::vector<double>& k_grid, double t, F&& eval) {
  CharFunc out;
  out.process = process;
  out.t = t;
  out.k = k_grid;
  out.value.reserve(k_grid.size());
  for (double c : k_grid) out.value.push_back(eval(c));
  out.standard_error.assign(k_grid.size(), 0.0);
  return out;
}

}  // namespace

Process parse_process(std::string_view name) {
  if (name == "plus") return Process::plus;
  if (name == "minus") return Process::minus;
  if (name == "homodyne") return Process::homodyne;
  if (name == "limit") return Process::limit;
  throw DomainError("unknown process '" + std::string(name) + "' (expected plus, minus, homodyne or limit)");
}

std::string_view process_name(Process p) {
  switch (p) {
    case Process::plus: return "plus";
    case Process::minus: return "minus";
    case Process::homodyne: return "homodyne";
    case Process::limit: return "limit";
  }
  return "?";
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

Complex charfunc_plus(const TestFunction& k, double alpha, double t) {
  if (!(alpha > 0.0)) throw DomainError("charfunc_plus: alpha must be positive");
  const double a2 = alpha * alpha;
  const double re = k.integrate([&](double kv) { return a2 * (std::cos(kv / a2) - 1.0); }, t);
  const double im = k.integrate([&](double kv) { return -a2 * std::sin(kv / a2); }, t);
  return std::exp(Complex(re, im));
}

Complex charfunc_minus(const TestFunction& k, double alpha, double kappa, const SpinSpace& space, const RealVector& p,
                       double t) {
  if (!(alpha > 0.0)) throw DomainError("charfunc_minus: alpha must be positive");
  check_distribution(p, space);
  const double a2 = alpha * alpha;
  return mixture(k, space, p, t, [&](double kv, double m) {
    return Complex(a2 * (std::cos(kv / alpha) - 1.0), -a2 * std::sin(kv / alpha) * std::sin(2.0 * kappa * m));
  });
}

Complex charfunc_homodyne(const TestFunction& k, double alpha, double kappa, const SpinSpace& space,
                          const RealVector& p, double t) {
  check_distribution(p, space);
  return mixture(k, space, p, t, [&](double kv, double m) {
    return Complex(-0.5 * kv * kv, -2.0 * kv * alpha * std::sin(kappa * m));
  });
}

Complex charfunc_limit(const TestFunction& k, double strength, const SpinSpace& space, const RealVector& p, double t) {
  if (strength < 0.0) throw DomainError("charfunc_limit: M must be nonnegative");
  check_distribution(p, space);
  const double s = std::sqrt(strength);
  return mixture(k, space, p, t, [&](double kv, double m) { return Complex(-0.5 * kv * kv, -2.0 * kv * s * m); });
}

CharFunc charfunc_plus_analytic(const TestFunction& shape, const std::vector<double>& k_grid, const ModelParams& params,
                                double t) {
  return sweep(Process::plus, k_grid, t,
               [&](double c) { return charfunc_plus(shape.scaled(c), params.alpha, t); });
}

CharFunc charfunc_minus_analytic(const TestFunction& shape, const std::vector<double>& k_grid,
                                 const ModelParams& params, const RealVector& p, double t) {
  return sweep(Process::minus, k_grid, t, [&](double c) {
    return charfunc_minus(shape.scaled(c), params.alpha, params.kappa, params.space, p, t);
  });
}

CharFunc charfunc_homodyne_analytic(const TestFunction& shape, const std::vector<double>& k_grid,
                                    const ModelParams& params, const RealVector& p, double t) {
  return sweep(Process::homodyne, k_grid, t, [&](double c) {
    return charfunc_homodyne(shape.scaled(c), params.alpha, params.kappa, params.space, p, t);
  });
}

CharFunc charfunc_limit_analytic(const TestFunction& shape, const std::vector<double>& k_grid, double m,
                                 const SpinSpace& space, const RealVector& p, double t) {
  return sweep(Process::limit, k_grid, t, [&](double c) { return charfunc_limit(shape.scaled(c), m, space, p, t); });
}

CharFunc charfunc_analytic(Process process, const TestFunction& shape, const std::vector<double>& k_grid,
                           const ModelParams& params, const RealVector& p, double t) {
  switch (process) {
    case Process::plus: return charfunc_plus_analytic(shape, k_grid, params, t);
    case Process::minus: return charfunc_minus_analytic(shape, k_grid, params, p, t);
    case Process::homodyne: return charfunc_homodyne_analytic(shape, k_grid, params, p, t);
    case Process::limit:
      return charfunc_limit_analytic(shape, k_grid, params.measurement_strength, params.space, p, t);
  }
  throw DomainError("charfunc: unknown process");
}

CharFunc empirical_charfunc(const EnsembleSummary& ensemble, Process process, const std::vector<double>& k_grid) {
  if (ensemble.terminal.empty()) throw DomainError("empirical_charfunc: empty ensemble");
  if (ensemble.terminal.size() < 100) throw DomainError("empirical_charfunc: need at least 100 trajectories");
  const bool counting = process == Process::plus || process == Process::minus;
  const Scheme expected = counting ? Scheme::polarimetry
                          : process == Process::homodyne ? Scheme::homodyne
                                                         : Scheme::limit;
  if (ensemble.scheme != expected) {
    throw DomainError("empirical_charfunc: process '" + std::string(process_name(process)) + "' needs a " +
                      std::string(scheme_name(expected)) + " ensemble");
  }
  const double n = static_cast<double>(ensemble.terminal.size());
  CharFunc out;
  out.process = process;
  out.t = ensemble.times.empty() ? 0.0 : ensemble.times.back();
  out.k = k_grid;
  for (double c : k_grid) {
    Complex acc = 0.0;
    for (const TerminalSample& s : ensemble.terminal) {
      const double pairing = process == Process::plus    ? s.pairing_plus
                             : process == Process::minus ? s.pairing_minus
                                                         : s.pairing_photocurrent;
      acc += std::exp(-kI * (c * pairing));
    }
    acc /= n;
    out.value.push_back(acc);
    out.standard_error.push_back(std::sqrt(std::max(0.0, 1.0 - std::norm(acc)) / std::max(1.0, n - 1.0)));
  }
  return out;
}

double sup_distance(const CharFunc& a, const CharFunc& b) {
  if (a.value.size() != b.value.size()) throw DomainError("sup_distance: grids differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.value.size(); ++i) d = std::max(d, std::abs(a.value[i] - b.value[i]));
  return d;
}

namespace {

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

ConvergenceStudy convergence_study(double m, const std::vector<double>& alphas, const std::vector<double>& k_grid,
                                   double horizon, const SpinSpace& space, const RealVector& p) {
  if (alphas.empty()) throw DomainError("convergence_study: alpha list is empty");
  if (!(m > 0.0)) throw DomainError("convergence_study: M must be positive");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0) || (i > 0 && !(alphas[i] > alphas[i - 1]))) {
      throw DomainError("convergence_study: alpha list must be positive and strictly increasing");
    }
  }
  const TestFunction unit = TestFunction::constant(1.0, horizon);
  const CharFunc limit = charfunc_limit_analytic(unit, k_grid, m, space, p, horizon);
  ConvergenceStudy study;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> lx, lp, lh;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    ModelParams params = ModelParams::from_strength(space, m, alphas[i], horizon, horizon);
    ConvergenceRow row;
    row.alpha = alphas[i];
    row.kappa = params.kappa;
    row.d_polarimetry = sup_distance(charfunc_minus_analytic(unit, k_grid, params, p, horizon), limit);
    row.d_homodyne = sup_distance(charfunc_homodyne_analytic(unit, k_grid, params, p, horizon), limit);
    row.rate_polarimetry = nan;
    row.rate_homodyne = nan;
    if (i > 0) {
      const ConvergenceRow& prev = study.rows.back();
      const double la = std::log(row.alpha / prev.alpha);
      row.rate_polarimetry = std::log(prev.d_polarimetry / row.d_polarimetry) / la;
      row.rate_homodyne = std::log(prev.d_homodyne / row.d_homodyne) / la;
    }
    lx.push_back(std::log(row.alpha));
    lp.push_back(-std::log(row.d_polarimetry));
    lh.push_back(-std::log(row.d_homodyne));
    study.rows.push_back(row);
  }
  study.fitted_rate_polarimetry = fitted_slope(lx, lp);
  study.fitted_rate_homodyne = fitted_slope(lx, lh);
  return study;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace faraday
