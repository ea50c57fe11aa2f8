// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "texsg/vec.hpp"

namespace texsg {

// Raised when an input violates an operation's domain contract.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a computation degenerates numerically (singular blends, NaN buffers).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Counter-based PRNG: a stateless mix of (seed, stream, counter) so that
// parallel consumers draw identical values regardless of scheduling.
struct CounterRng {
    uint64_t seed = 0;
    uint64_t stream = 0;
    uint64_t counter = 0;

    CounterRng(uint64_t seed_ = 0, uint64_t stream_ = 0) : seed(seed_), stream(stream_) {}

    uint64_t next_u64() {
        uint64_t z = seed + 0x9e3779b97f4a7c15ull * (++counter);
        z ^= stream * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    int next_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next_u64() % uint64_t(hi - lo + 1));
    }

    Vec3 unit_vector() {
        double z = 2.0 * next_double() - 1.0;
        double phi = kTwoPi * next_double();
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }
};

// Number of worker threads: TEXSG_THREADS if set, hardware concurrency otherwise.
int worker_count();

// Chunked parallel loop over [0, n). Deterministic work assignment; the body
// must not depend on execution order.
void parallel_for(size_t n, const std::function<void(size_t)>& body);

// FNV-1a over a string, used for config hashes in run manifests.
uint64_t fnv1a(const std::string& s);

}  // namespace texsg
