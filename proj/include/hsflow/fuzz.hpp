#pragma once

// Randomized checks of the pointwise linear-algebra identities, runnable
// from the CLI with a seed so failures reproduce.

#include <cstdint>
#include <string>
#include <vector>

namespace hsflow {

// splitmix64: tiny, deterministic across platforms, one stream per trial.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }      // [0,1)
    double sym() { return 2.0 * uniform() - 1.0; }               // [-1,1)
    // dyadic lattice value in [-1,1] with headroom, so sums and halvings
    // of pairs are exact in double precision
    double lattice() {
        const std::int64_t k = static_cast<std::int64_t>(next() >> 38) -
                               (1LL << 25);
        return static_cast<double>(k) * 0x1.0p-25;
    }
};

struct FuzzResult {
    std::string name;
    long trials = 0;
    double worst = 0;   // worst observed error / violation
    double tol = 0;
    bool ok = true;
};

std::vector<FuzzResult> run_lemma_fuzz(std::uint64_t seed, long trials);

}  // namespace hsflow
