#pragma once

#include <cstdint>
#include <random>

namespace fjrec {

// Versioned, seedable random source.
//
// Scheme "fjrec-rng-v1":
//   * substream seed = splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9E3779B97F4A7C15))
//   * engine         = std::mt19937_64 seeded with the substream seed (bit-exact per the
//                      C++ standard, so draws are portable across standard libraries)
//   * uniform()      = top 53 bits of one engine output scaled by 2^-53, in [0,1)
//   * below(k)       = one engine output modulo k, rejecting the biased top range
//   * beta(a,b)      = inverse regularized incomplete beta of one uniform() draw
//
// std::*_distribution is deliberately not used: its output is implementation defined.
class Rng {
public:
    static constexpr const char* kScheme = "fjrec-rng-v1";

    Rng(std::uint64_t seed, std::uint64_t stream);

    // Independent generator for a named substream of the same master seed.
    Rng substream(std::uint64_t stream) const { return Rng(seed_, stream); }

    std::uint64_t next() { return engine_(); }
    double uniform();
    double uniform(double lo, double hi);
    bool bernoulli(double p);
    std::uint64_t below(std::uint64_t bound);
    double beta(double alpha, double beta);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Derives a child seed for a named purpose ("network", "corpus", ...) from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose);

// Quantile of Beta(alpha, beta) at probability p.
double beta_quantile(double alpha, double beta, double p);

}  // namespace fjrec
