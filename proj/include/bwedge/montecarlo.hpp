#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "bwedge/bwm.hpp"

namespace bwedge {

/// Philox4x32-10 counter-based generator. The stream is fully determined by
/// (key, counter high word); draws advance the low counter word. Satisfies
/// UniformRandomBitGenerator with 32-bit output.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

struct SimConfig {
  BwmProblem prob;
  long reps = 1000000;
  std::uint64_t seed = 0;
  int streams = 1;
};

/// One draw of Z for replication index `rep`; every replication owns the
/// generator keyed by (seed, rep), so results never depend on chunking.
double sample_z_replication(const BwmProblem& prob, std::uint64_t seed, std::uint64_t rep);

/// Z draws ordered by replication index. Parallel splits the reps into
/// cfg.streams contiguous chunks run concurrently; the output is identical to
/// Serial for every stream count.
std::vector<double> sample_z(const SimConfig& cfg, Execution exec = Execution::Parallel);

/// Right-continuous empirical CDF.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double x) const;
  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_samples() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf empirical_cdf(std::vector<double> samples);

/// DKW half-width sqrt(ln(2/(1-confidence)) / (2 reps)).
double dkw_band(long reps, double confidence);

}  // namespace bwedge
