#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace boostlab::detail {

// Worker count: hardware concurrency, capped by BOOSTLAB_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Iterations
// must be independent; results are written by index so the outcome does not
// depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Per-stream generator. mt19937_64 and seed_seq are fully specified by the
// standard and the uniform mapping below is explicit, so streams are
// identical on every platform for a given (seed, stream).
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);
    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace boostlab::detail
