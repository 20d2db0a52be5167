#include "bwedge/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bwedge/error.hpp"

namespace bwedge {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
      counter_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Philox4x32::result_type Philox4x32::operator()() noexcept {
  if (used_ == 4) {
    buffer_ = block(counter_, key_);
    if (++counter_[0] == 0) ++counter_[1];
    used_ = 0;
  }
  return buffer_[static_cast<std::size_t>(used_++)];
}

double sample_z_replication(const BwmProblem& prob, std::uint64_t seed, std::uint64_t rep) {
  Philox4x32 rng(seed, rep);
  const long gated = std::binomial_distribution<long>(prob.binom.n, prob.binom.p)(rng);
  if (gated == 0) return 0.0;
  double sum = 0.0;
  for (long i = 0; i < gated; ++i) sum += prob.dist.sample(rng);
  const double k = static_cast<double>(gated);
  return std::sqrt(k) * (sum / k - prob.dist.mean()) / prob.dist.sd();
}

std::vector<double> sample_z(const SimConfig& cfg, Execution exec) {
  if (cfg.reps < 1) fail(ErrorCode::IllegalParameter, "reps must be >= 1");
  if (cfg.streams < 1) fail(ErrorCode::IllegalParameter, "streams must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(cfg.reps));
  if (exec == Execution::Serial) {
    for (long r = 0; r < cfg.reps; ++r) {
      out[static_cast<std::size_t>(r)] = sample_z_replication(cfg.prob, cfg.seed, static_cast<std::uint64_t>(r));
    }
    return out;
  }
  const long chunk = (cfg.reps + cfg.streams - 1) / cfg.streams;
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < cfg.streams; ++s) {
    const long begin = static_cast<long>(s) * chunk;
    const long end = std::min(cfg.reps, begin + chunk);
    for (long r = begin; r < end; ++r) {
      out[static_cast<std::size_t>(r)] = sample_z_replication(cfg.prob, cfg.seed, static_cast<std::uint64_t>(r));
    }
  }
  return out;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) fail(ErrorCode::EmptySample, "empirical CDF of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto above = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(above - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalCdf empirical_cdf(std::vector<double> samples) { return EmpiricalCdf(std::move(samples)); }

double dkw_band(long reps, double confidence) {
  if (reps < 1) fail(ErrorCode::EmptySample, "DKW band needs reps >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) fail(ErrorCode::IllegalParameter, "confidence must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(reps)));
}

}  // namespace bwedge
