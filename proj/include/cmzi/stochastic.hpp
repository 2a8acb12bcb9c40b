#pragma once

// Coupling-phase fluctuations, Monte Carlo drain events, and the
// contextual-value estimator with its error budget.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmzi/measurement.hpp"
#include "cmzi/params.hpp"
#include "cmzi/scattering.hpp"

namespace cmzi {

/// Density (1/2 sigma)(1 + cos(pi (g' - g)/sigma)) on [g - sigma, g + sigma].
/// Throws DomainError for sigma = 0.
double raised_cosine_pdf(double gamma_prime, const CouplingModel& model);

/// eta(sigma) = (pi^2 / (pi^2 - sigma^2)) (sin sigma / sigma), the raised-cosine
/// characteristic function at unit frequency; eta(0) = 1, eta(pi) = 1/2.
/// Throws DomainError outside [0, pi].
double damping_eta(double sigma);

/// Detector parameters of the POVM averaged over the coupling distribution
/// (raised cosine for pairs, gamma = 0 for unpaired emissions):
///   Gamma -> P_p (cos(phi)/2 + eta (Gamma - cos(phi)/2)),  Delta -> cos(phi) - Gamma.
/// With cos(phi^d) = 0 this is the plain damping Gamma -> P_p eta Gamma.
DetectorParams averaged_detector_params(const DetectorParams& p, const CouplingModel& model);

/// Joint statistics averaged over the coupling distribution. Every pipeline
/// probability is a + b cos g + c sin g in the coupling, so the average is
/// exact: mean + eta * oscillation from evaluations at g and g + pi.
JointStatistics averaged_joint_statistics(const InterferometerConfig& det,
                                          const InterferometerConfig& sys,
                                          const CouplingModel& model);

/// Probability operators averaged over the coupling distribution, by the
/// same exact mean + eta * oscillation rule.
PovmPair averaged_povm(const InterferometerConfig& det, const CouplingModel& model);

/// SplitMix64 (Steele, Lea, Flood 2014). Counter-based: output k depends
/// only on the seed and k.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

inline constexpr std::string_view kRngAlgorithm = "splitmix64/block-65536";
inline constexpr std::size_t kSampleBlock = 65536;

/// Seed of event block `block` derived from the master seed.
std::uint64_t block_seed(std::uint64_t master, std::uint64_t block);

struct EventRecord {
  DetectorDrain detector = DetectorDrain::D1;
  SystemDrain system = SystemDrain::S1;
  std::uint64_t sequence_index = 0;
};

/// n i.i.d. draws from the joint drain distribution. Events are produced in
/// fixed blocks with independent sub-seeds; `workers` (0 = hardware
/// concurrency) changes only the wall time, never the sequence.
std::vector<EventRecord> sample_events(const JointStatistics& stats, std::size_t n,
                                       std::uint64_t seed, unsigned workers = 0);

/// Validation path: draws a coupling phase per event (pair emission with
/// probability P_p, raised-cosine phase) and then the drains at that phase.
std::vector<EventRecord> sample_events_fluctuating(const InterferometerConfig& det,
                                                   const InterferometerConfig& sys,
                                                   const CouplingModel& model, std::size_t n,
                                                   std::uint64_t seed);

/// Inverse CDF of the raised-cosine distribution, u in [0, 1].
double raised_cosine_quantile(double u, const CouplingModel& model);

struct EstimateReport {
  double estimate = 0.0;
  std::size_t n = 0;
  double empirical_variance = 0.0;  ///< plug-in variance of the event values / n
  double predicted_mse = 0.0;       ///< (a1^2 P1 + a2^2 P2 - <A>^2) / n
  double mse_upper_bound = 0.0;     ///< (a1^2 + a2^2) / n
  std::uint64_t seed = 0;
  std::string rng_algorithm{kRngAlgorithm};
};

/// Mean of the contextual values over the detector outcomes of `events`.
/// `detector_probabilities` are the exact (P_D1, P_D2) used for the predicted
/// MSE. Throws DomainError on an empty event list.
EstimateReport contextual_estimate(std::span<const EventRecord> events, const ContextualValues& cv,
                                   std::array<double, 2> detector_probabilities,
                                   std::uint64_t seed = 0);

struct ObservationBudget {
  std::optional<double> tau_m;  ///< s; falls back to path_length / fermi_velocity
  double path_length = 10e-6;   ///< m
  double fermi_velocity = 1e5;  ///< m/s
  double target_rms = 0.1;
};

/// tau_m, or the time of flight l / v_F when tau_m is unset.
double mean_absorption_time(const ObservationBudget& budget);

/// tau_m = h / (e V P) from the detector current.
double absorption_time_from_current(double total_probability, const PhysicalBias& bias);

/// T = tau_m (a1^2 + a2^2) / eps^2. Throws DomainError unless eps > 0.
double observation_time(const ContextualValues& cv, const ObservationBudget& budget);

}  // namespace cmzi
