#ifndef L2INFER_RNG_HPP
#define L2INFER_RNG_HPP

#include <cstdint>

namespace l2 {

/// Counter-based uniform variates (Philox 4x32-10).
///
/// Every draw is a pure function of (key, hi, lo): `key` is the user seed,
/// `hi` identifies a stream (replicate, row, ...) and `lo` is the position
/// within the stream.  Streams are disjoint by construction, so generating
/// them in parallel or in any order produces bit-identical results.
double u01_at(std::uint64_t key, std::uint64_t hi, std::uint64_t lo);

/// Standard normal variate at (key, hi, lo) via the inverse CDF.
double normal_at(std::uint64_t key, std::uint64_t hi, std::uint64_t lo);

/// Derive an unrelated sub-seed for domain separation (splitmix64 of seed^tag).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Inverse standard normal CDF (Wichura's AS 241, double precision).
double normal_icdf(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Sequential view of one stream: draws advance the position counter.
class Rng {
  public:
    Rng(std::uint64_t key, std::uint64_t stream) : key_(key), hi_(stream), lo_(0) {}

    double u01() { return u01_at(key_, hi_, lo_++); }
    double normal() { return normal_at(key_, hi_, lo_++); }

    double chisq1() {
        const double z = normal();
        return z * z;
    }

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * u01(); }

    std::uint64_t position() const { return lo_; }

  private:
    std::uint64_t key_;
    std::uint64_t hi_;
    std::uint64_t lo_;
};

}  // namespace l2

#endif
