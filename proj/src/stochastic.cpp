#include "cmzi/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "cmzi/constants.hpp"
#include "cmzi/errors.hpp"

namespace cmzi {

using std::numbers::pi;

double raised_cosine_pdf(double gamma_prime, const CouplingModel& model) {
  const double sigma = model.sigma();
  if (sigma == 0.0) {
    throw DomainError("raised-cosine density is degenerate at sigma = 0; use the deterministic coupling");
  }
  const double offset = gamma_prime - model.gamma();
  if (std::abs(offset) > sigma) return 0.0;
  return (1.0 + std::cos(pi * offset / sigma)) / (2.0 * sigma);
}

double damping_eta(double sigma) {
  if (!(sigma >= 0.0 && sigma <= pi)) {
    throw DomainError(fmt::format("fluctuation half-width {} outside [0, pi]", sigma));
  }
  if (sigma == 0.0) return 1.0;
  if (sigma <= pi / 2) return (pi * pi / (pi * pi - sigma * sigma)) * (std::sin(sigma) / sigma);
  // sin(sigma) = sin(pi - sigma); cancel the (pi - sigma) factor analytically.
  const double u = pi - sigma;
  const double sinc = u == 0.0 ? 1.0 : std::sin(u) / u;
  return pi * pi * sinc / (sigma * (pi + sigma));
}

DetectorParams averaged_detector_params(const DetectorParams& p, const CouplingModel& model) {
  const double eta = damping_eta(model.sigma());
  const double cos_phi = p.background + p.correlation;
  DetectorParams out = p;
  out.correlation = model.pair_probability() * (0.5 * cos_phi + eta * (p.correlation - 0.5 * cos_phi));
  out.background = cos_phi - out.correlation;
  return out;
}

JointStatistics averaged_joint_statistics(const InterferometerConfig& det,
                                          const InterferometerConfig& sys,
                                          const CouplingModel& model) {
  const double g = model.gamma();
  const JointStatistics at = joint_statistics(joint_amplitudes(det, sys, g));
  if (model.is_deterministic()) return at;
  const JointStatistics opposite = joint_statistics(joint_amplitudes(det, sys, g + pi));
  const JointStatistics uncoupled = joint_statistics(joint_amplitudes(det, sys, 0.0));
  const double eta = damping_eta(model.sigma());
  const double pp = model.pair_probability();

  std::array<std::array<double, 2>, 2> table{};
  for (auto d : {DetectorDrain::D1, DetectorDrain::D2}) {
    for (auto s : {SystemDrain::S1, SystemDrain::S2}) {
      const double mean = 0.5 * (at.joint(d, s) + opposite.joint(d, s));
      const double osc = 0.5 * (at.joint(d, s) - opposite.joint(d, s));
      table[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)] =
          pp * (mean + eta * osc) + (1.0 - pp) * uncoupled.joint(d, s);
    }
  }
  return JointStatistics(table);
}

PovmPair averaged_povm(const InterferometerConfig& det, const CouplingModel& model) {
  const double g = model.gamma();
  const PovmPair at = povm_pair(measurement_operators(det, g));
  if (model.is_deterministic()) return at;
  const PovmPair opposite = povm_pair(measurement_operators(det, g + pi));
  const PovmPair uncoupled = povm_pair(measurement_operators(det, 0.0));
  const double eta = damping_eta(model.sigma());
  const double pp = model.pair_probability();
  auto average = [&](DetectorDrain k) {
    const Mat2 mean = 0.5 * (at[k].matrix() + opposite[k].matrix());
    const Mat2 osc = 0.5 * (at[k].matrix() - opposite[k].matrix());
    return Hermitian2(pp * (mean + eta * osc) + (1.0 - pp) * uncoupled[k].matrix());
  };
  return PovmPair(average(DetectorDrain::D1), average(DetectorDrain::D2));
}

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t block_seed(std::uint64_t master, std::uint64_t block) {
  return SplitMix64::mix(master ^ SplitMix64::mix(block + 0x6a09e667f3bcc909ULL));
}

namespace {

struct Categorical {
  std::array<double, 3> cumulative{};

  explicit Categorical(const JointStatistics& stats) {
    cumulative[0] = stats.joint(DetectorDrain::D1, SystemDrain::S1);
    cumulative[1] = cumulative[0] + stats.joint(DetectorDrain::D1, SystemDrain::S2);
    cumulative[2] = cumulative[1] + stats.joint(DetectorDrain::D2, SystemDrain::S1);
  }

  EventRecord draw(double u, std::uint64_t index) const {
    int k = 3;
    for (int i = 0; i < 3; ++i) {
      if (u < cumulative[static_cast<std::size_t>(i)]) {
        k = i;
        break;
      }
    }
    return {static_cast<DetectorDrain>(k / 2), static_cast<SystemDrain>(k % 2), index};
  }
};

}  // namespace

std::vector<EventRecord> sample_events(const JointStatistics& stats, std::size_t n,
                                       std::uint64_t seed, unsigned workers) {
  if (n == 0) throw DomainError("event count must be at least 1");
  const Categorical dist(stats);
  std::vector<EventRecord> events(n);
  const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;

  auto run_block = [&](std::size_t b) {
    SplitMix64 rng(block_seed(seed, b));
    const std::size_t end = std::min(n, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) events[i] = dist.draw(rng.uniform(), i);
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return events;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < blocks; b += workers) run_block(b);
    });
  }
  return events;  // jthreads join before `events` is moved out
}

double raised_cosine_quantile(double u, const CouplingModel& model) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level outside [0, 1]");
  const double sigma = model.sigma();
  if (sigma == 0.0) return model.gamma();
  if (u == 0.0) return model.gamma() - sigma;
  if (u == 1.0) return model.gamma() + sigma;
  // CDF in the scaled offset z in [-1, 1]: F = (1 + z + sin(pi z)/pi) / 2, monotone.
  auto cdf = [](double z) { return 0.5 * (1.0 + z + std::sin(pi * z) / pi); };
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return model.gamma() + sigma * 0.5 * (lo + hi);
}

std::vector<EventRecord> sample_events_fluctuating(const InterferometerConfig& det,
                                                   const InterferometerConfig& sys,
                                                   const CouplingModel& model, std::size_t n,
                                                   std::uint64_t seed) {
  if (n == 0) throw DomainError("event count must be at least 1");
  std::vector<EventRecord> events;
  events.reserve(n);
  for (std::size_t b = 0; b * kSampleBlock < n; ++b) {
    SplitMix64 rng(block_seed(seed, b));
    const std::size_t end = std::min(n, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) {
      const bool paired = rng.uniform() < model.pair_probability();
      const double level = rng.uniform();
      const double g = paired ? raised_cosine_quantile(level, model) : 0.0;
      const Categorical dist(joint_statistics(joint_amplitudes(det, sys, g)));
      events.push_back(dist.draw(rng.uniform(), i));
    }
  }
  return events;
}

EstimateReport contextual_estimate(std::span<const EventRecord> events, const ContextualValues& cv,
                                   std::array<double, 2> detector_probabilities,
                                   std::uint64_t seed) {
  if (events.empty()) throw DomainError("contextual estimate needs at least one event");
  if (!std::isfinite(cv.alpha_d1) || !std::isfinite(cv.alpha_d2)) {
    throw DomainError("contextual values must be finite");
  }
  std::size_t count_d1 = 0;
  for (const auto& e : events) count_d1 += e.detector == DetectorDrain::D1 ? 1 : 0;
  const double n = static_cast<double>(events.size());
  const double f1 = static_cast<double>(count_d1) / n;
  const double f2 = 1.0 - f1;
  const double a1 = cv.alpha_d1, a2 = cv.alpha_d2;

  EstimateReport r;
  r.n = events.size();
  r.seed = seed;
  r.estimate = a1 * f1 + a2 * f2;
  // Two-point distribution: variance = f1 f2 (a1 - a2)^2.
  r.empirical_variance = f1 * f2 * (a1 - a2) * (a1 - a2) / n;
  const double p1 = detector_probabilities[0], p2 = detector_probabilities[1];
  const double mean = a1 * p1 + a2 * p2;
  r.predicted_mse = std::max(0.0, a1 * a1 * p1 + a2 * a2 * p2 - mean * mean) / n;
  r.mse_upper_bound = (a1 * a1 + a2 * a2) / n;
  return r;
}

double mean_absorption_time(const ObservationBudget& budget) {
  if (budget.tau_m) {
    if (!(*budget.tau_m > 0.0)) throw DomainError("tau_m must be positive");
    return *budget.tau_m;
  }
  if (!(budget.path_length > 0.0 && budget.fermi_velocity > 0.0)) {
    throw DomainError("path length and Fermi velocity must be positive");
  }
  return budget.path_length / budget.fermi_velocity;
}

double absorption_time_from_current(double total_probability, const PhysicalBias& bias) {
  if (!(total_probability > 0.0 && bias.voltage > 0.0)) {
    throw DomainError("absorption time needs positive probability and bias");
  }
  return constants::planck / (constants::elementary_charge * bias.voltage * total_probability);
}

double observation_time(const ContextualValues& cv, const ObservationBudget& budget) {
  if (!(budget.target_rms > 0.0)) throw DomainError("target RMS error must be positive");
  const double norm2 = cv.alpha_d1 * cv.alpha_d1 + cv.alpha_d2 * cv.alpha_d2;
  return mean_absorption_time(budget) * norm2 / (budget.target_rms * budget.target_rms);
}

}  // namespace cmzi
