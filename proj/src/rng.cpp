#include "fjrec/rng.hpp"

#include "fjrec/errors.hpp"

#include <limits>

#include <boost/math/special_functions/beta.hpp>

namespace fjrec {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose) {
    return splitmix64(splitmix64(master) ^ splitmix64(purpose * 0xD1B54A32D192ED03ULL + 1));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL))) {}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

bool Rng::bernoulli(double p) {
    return uniform() < p;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw DomainError("Rng::below: bound must be positive");
    // Largest multiple of bound minus one; draws above it are rejected.
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % bound + 1) % bound;
    std::uint64_t r = engine_();
    while (r > limit) r = engine_();
    return r % bound;
}

double Rng::beta(double alpha, double beta) {
    return beta_quantile(alpha, beta, uniform());
}

double beta_quantile(double alpha, double beta, double p) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("beta shape parameters must be positive");
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    return boost::math::ibeta_inv(alpha, beta, p);
}

}  // namespace fjrec
