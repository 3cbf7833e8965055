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

#include "faraday/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "faraday/error.hpp"

namespace faraday {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::size_t kChunkSize = 16;

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t state = base_seed;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (index * 0xd1b54a32d192ed03ULL);
  return splitmix64(state);
}

CoSimulator::CoSimulator(const ModelParams& params, Scheme scheme, FilterMode mode, const DensityState& rho0,
                         std::uint64_t seed, FilterOptions options)
    : filter_(params, scheme, options),
      state_(FilterState::start(rho0, scheme, mode)),
      rng_(seed),
      total_steps_(params.steps()) {
  if (rho0.dim() != params.space.dim()) throw DomainError("initial state dimension does not match J");
}

double CoSimulator::y_plus() const {
  const double a = filter_.params().alpha;
  return a > 0.0 ? static_cast<double>(count_xi_ + count_eta_) / (a * a) : 0.0;
}

double CoSimulator::y_minus() const {
  const double a = filter_.params().alpha;
  return a > 0.0 ? static_cast<double>(count_xi_ - count_eta_) / a : 0.0;
}

ObservationIncrement CoSimulator::sample() {
  const double h = filter_.params().dt;
  if (filter_.scheme() == Scheme::polarimetry) {
    const PolarimetryRates r = filter_.rates(state_.rho, state_.t);
    const double p_xi = r.xi * h;
    const double p_eta = r.eta * h;
    if (p_xi + p_eta > 1.0) throw DomainError("polarimetry: jump probability per step exceeds 1; reduce dt");
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    CountEvent ev = CountEvent::none;
    if (u < p_xi) {
      ev = CountEvent::xi;
    } else if (u < p_xi + p_eta) {
      ev = CountEvent::eta;
    }
    return ObservationIncrement::count(ev, h);
  }
  const double g = std::normal_distribution<double>(0.0, 1.0)(rng_);
  const double dy = filter_.predicted_drift(state_.rho, state_.t) * h + std::sqrt(h) * g;
  return ObservationIncrement::diffusive(dy, h);
}

void CoSimulator::advance(const ObservationIncrement& obs) {
  if (done()) throw DomainError("co-simulation: horizon already reached");
  last_innovation_ = filter_.step(state_, obs);
  ++step_;
  if (obs.event == CountEvent::xi) ++count_xi_;
  if (obs.event == CountEvent::eta) ++count_eta_;
  photocurrent_ += obs.dy;
  cumulative_innovation_[0] += last_innovation_.value[0];
  cumulative_innovation_[1] += last_innovation_.value[1];
  innovation_qv_ += last_innovation_.value[0] * last_innovation_.value[0];
}

ObservationIncrement CoSimulator::step() {
  const ObservationIncrement obs = sample();
  advance(obs);
  return obs;
}

namespace {

void record_point(TrajectoryRecord& rec, const CoSimulator& sim, bool full_state) {
  const FilterState& s = sim.state();
  rec.times.push_back(s.t);
  rec.moments.push_back(sim.filter().moments(s.rho));
  rec.log_likelihood.push_back(s.log_likelihood);
  if (full_state) rec.states.push_back(s.rho);
  rec.count_xi.push_back(sim.count_xi());
  rec.count_eta.push_back(sim.count_eta());
  rec.y_plus.push_back(sim.y_plus());
  rec.y_minus.push_back(sim.y_minus());
  rec.photocurrent.push_back(sim.photocurrent());
  rec.innovation.push_back(sim.cumulative_innovation());
  rec.innovation_qv.push_back(sim.innovation_qv());
}

TrajectoryRecord start_record(const ModelParams& params, Scheme scheme, FilterMode mode, std::uint64_t seed) {
  TrajectoryRecord rec;
  rec.scheme = scheme;
  rec.mode = mode;
  rec.params = params;
  rec.seed = seed;
  const std::size_t n = params.steps();
  rec.increments.reserve(n);
  rec.times.reserve(n + 1);
  rec.moments.reserve(n + 1);
  return rec;
}

}  // namespace

TrajectoryRecord simulate(const ModelParams& params, Scheme scheme, FilterMode mode, const DensityState& rho0,
                          std::uint64_t seed, const TrajectoryOptions& options) {
  CoSimulator sim(params, scheme, mode, rho0, seed, options.filter);
  TrajectoryRecord rec = start_record(params, scheme, mode, seed);
  record_point(rec, sim, options.record_full_state);
  while (!sim.done()) {
    rec.increments.push_back(sim.step());
    record_point(rec, sim, options.record_full_state);
  }
  return rec;
}

TrajectoryRecord simulate_polarimetry(const ModelParams& params, const DensityState& rho0, std::uint64_t seed,
                                      FilterMode mode, const TrajectoryOptions& options) {
  return simulate(params, Scheme::polarimetry, mode, rho0, seed, options);
}

TrajectoryRecord simulate_homodyne(const ModelParams& params, const DensityState& rho0, std::uint64_t seed,
                                   FilterMode mode, const TrajectoryOptions& options) {
  return simulate(params, Scheme::homodyne, mode, rho0, seed, options);
}

TrajectoryRecord simulate_limit(const ModelParams& params, const DensityState& rho0, std::uint64_t seed,
                                FilterMode mode, const TrajectoryOptions& options) {
  return simulate(params, Scheme::limit, mode, rho0, seed, options);
}

TrajectoryRecord replay(const ModelParams& params, Scheme scheme, FilterMode mode, const DensityState& rho0,
                        const std::vector<ObservationIncrement>& increments, const TrajectoryOptions& options) {
  CoSimulator sim(params, scheme, mode, rho0, 0, options.filter);
  if (increments.size() != sim.total_steps()) {
    throw DomainError("replay: record has " + std::to_string(increments.size()) + " increments, expected " +
                      std::to_string(sim.total_steps()));
  }
  TrajectoryRecord rec = start_record(params, scheme, mode, 0);
  record_point(rec, sim, options.record_full_state);
  for (const ObservationIncrement& obs : increments) {
    sim.advance(obs);
    rec.increments.push_back(obs);
    record_point(rec, sim, options.record_full_state);
  }
  return rec;
}

double EnsembleSummary::standard_error(Series s, std::size_t sample) const {
  const int i = static_cast<int>(s);
  const double m = series_mean[i][sample];
  const double var = std::max(0.0, series_second_moment[i][sample] - m * m);
  return n > 1 ? std::sqrt(var * static_cast<double>(n) / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
}

double EnsembleSummary::state_standard_error(std::size_t sample) const {
  const double var = (state_second_moment[sample].array() - mean_state[sample].array().abs2()).max(0.0).sum();
  return n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
}

std::size_t EnsembleSummary::sample_at(double t) const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
  }
  return best;
}

namespace {

// Sums over a block of trajectories; combined in block order.
struct Accumulator {
  std::vector<Matrix> state_sum;
  std::vector<Eigen::MatrixXd> state_sq;
  std::array<std::vector<double>, kSeriesCount> sum;
  std::array<std::vector<double>, kSeriesCount> sq;

  Accumulator(std::size_t samples, Eigen::Index dim)
      : state_sum(samples, Matrix::Zero(dim, dim)), state_sq(samples, Eigen::MatrixXd::Zero(dim, dim)) {
    for (int i = 0; i < kSeriesCount; ++i) {
      sum[i].assign(samples, 0.0);
      sq[i].assign(samples, 0.0);
    }
  }

  void add(const Accumulator& o) {
    for (std::size_t s = 0; s < state_sum.size(); ++s) {
      state_sum[s] += o.state_sum[s];
      state_sq[s] += o.state_sq[s];
    }
    for (int i = 0; i < kSeriesCount; ++i) {
      for (std::size_t s = 0; s < sum[i].size(); ++s) {
        sum[i][s] += o.sum[i][s];
        sq[i][s] += o.sq[i][s];
      }
    }
  }
};

void accumulate_point(Accumulator& acc, std::size_t sample, const CoSimulator& sim) {
  const FilterState& st = sim.state();
  acc.state_sum[sample] += st.rho;
  acc.state_sq[sample] += st.rho.cwiseAbs2();
  const Moments m = sim.filter().moments(st.rho);
  const double obs = sim.filter().scheme() == Scheme::polarimetry ? sim.y_minus() : sim.photocurrent();
  const std::array<double, kSeriesCount> v{m.fx,
                                           m.fy,
                                           m.fz,
                                           m.fz2,
                                           m.var_fz,
                                           m.purity,
                                           sim.cumulative_innovation()[0],
                                           sim.cumulative_innovation()[1],
                                           obs,
                                           st.log_likelihood};
  for (int i = 0; i < kSeriesCount; ++i) {
    acc.sum[i][sample] += v[i];
    acc.sq[i][sample] += v[i] * v[i];
  }
}

}  // namespace

EnsembleSummary run_ensemble(const ModelParams& params, Scheme scheme, FilterMode mode, const DensityState& rho0,
                             std::size_t n, std::uint64_t base_seed, const EnsembleOptions& options) {
  if (n == 0) throw DomainError("ensemble: n_traj must be positive");
  params.validate();
  const std::size_t steps = params.steps();
  std::size_t every = options.sample_every;
  if (every == 0) every = std::max<std::size_t>(1, steps / 100);

  EnsembleSummary out;
  out.scheme = scheme;
  out.mode = mode;
  out.n = n;
  out.base_seed = base_seed;
  for (std::size_t k = 0; k <= steps; k += every) out.sample_steps.push_back(k);
  if (out.sample_steps.back() != steps) out.sample_steps.push_back(steps);
  for (std::size_t k : out.sample_steps) out.times.push_back(params.time_at(k));
  const std::size_t samples = out.sample_steps.size();
  const Eigen::Index dim = params.space.dim();

  const TestFunction test = options.test_function ? *options.test_function : TestFunction::constant(1.0, params.horizon);
  // Validate configuration once before spawning workers.
  Filter probe(params, scheme, options.filter);
  (void)probe;

  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Accumulator> partial;
  partial.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) partial.emplace_back(samples, dim);
  out.terminal.assign(n, TerminalSample{});

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        Accumulator& acc = partial[c];
        const std::size_t hi = std::min(n, (c + 1) * kChunkSize);
        for (std::size_t i = c * kChunkSize; i < hi; ++i) {
          CoSimulator sim(params, scheme, mode, rho0, trajectory_seed(base_seed, i), options.filter);
          TerminalSample& term = out.terminal[i];
          std::size_t next_sample = 0;
          if (out.sample_steps[next_sample] == 0) accumulate_point(acc, next_sample++, sim);
          const double a = params.alpha;
          while (!sim.done()) {
            const double k = test(sim.state().t);
            const ObservationIncrement obs = sim.step();
            if (obs.event != CountEvent::none && a > 0.0) {
              term.pairing_plus += k / (a * a);
              term.pairing_minus += (obs.event == CountEvent::xi ? k : -k) / a;
            }
            term.pairing_photocurrent += k * obs.dy;
            if (next_sample < samples && out.sample_steps[next_sample] == sim.step_index()) {
              accumulate_point(acc, next_sample++, sim);
            }
          }
          const Moments m = sim.filter().moments(sim.state().rho);
          term.count_xi = sim.count_xi();
          term.count_eta = sim.count_eta();
          term.y_plus = sim.y_plus();
          term.y_minus = sim.y_minus();
          term.photocurrent = sim.photocurrent();
          term.fz = m.fz;
          term.var_fz = m.var_fz;
          term.innovation_qv = sim.innovation_qv();
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Accumulator total(samples, dim);
  for (const Accumulator& p : partial) total.add(p);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t s = 0; s < samples; ++s) {
    out.mean_state.push_back(total.state_sum[s] * inv);
    out.state_second_moment.push_back(total.state_sq[s] * inv);
  }
  for (int i = 0; i < kSeriesCount; ++i) {
    out.series_mean[i].resize(samples);
    out.series_second_moment[i].resize(samples);
    for (std::size_t s = 0; s < samples; ++s) {
      out.series_mean[i][s] = total.sum[i][s] * inv;
      out.series_second_moment[i][s] = total.sq[i][s] * inv;
    }
  }
  return out;
}

}  // namespace faraday
