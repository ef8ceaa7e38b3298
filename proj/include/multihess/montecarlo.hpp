#pragma once

#include "multihess/banded.hpp"

#include <cstdint>
#include <vector>

namespace multihess {

struct SimulationReport {
    int start = 0;
    int steps = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<std::uint64_t> counts;
    std::vector<double> empirical;  // counts / trials
    std::vector<double> reference;  // empty until attach_reference
    std::vector<double> z_scores;
    double max_abs_z = 0;
};

// Trajectories of a finite row-stochastic matrix by inverse-CDF sampling of each row.
// workers == 1 draws every trial from one xoshiro256** stream seeded with `seed`; with
// more workers trials are split in contiguous blocks, worker w seeded by derive_seed(seed, w).
SimulationReport simulate(const Matrix<double>& P, int start, int steps, std::uint64_t trials, std::uint64_t seed,
                          int workers = 1);

// z = (q_hat - q) / sqrt(q (1 - q) / trials); a degenerate q gives 0 on agreement, infinity otherwise.
void attach_reference(SimulationReport& report, const std::vector<double>& reference);

}  // namespace multihess
