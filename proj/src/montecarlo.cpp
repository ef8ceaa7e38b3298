#include "multihess/montecarlo.hpp"

#include "multihess/errors.hpp"
#include "multihess/rng.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace multihess {

namespace {

// Cumulative sums over the nonzero span of each row.
struct RowSampler {
    std::vector<int> first;
    std::vector<std::vector<double>> cdf;

    explicit RowSampler(const Matrix<double>& P) {
        const std::size_t n = P.size();
        first.resize(n);
        cdf.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t lo = 0, hi = n;
            while (lo < n && P[i][lo] == 0) ++lo;
            while (hi > lo && P[i][hi - 1] == 0) --hi;
            first[i] = static_cast<int>(lo);
            double acc = 0;
            for (std::size_t j = lo; j < hi; ++j) cdf[i].push_back(acc += P[i][j]);
        }
    }

    int step(int state, double u) const {
        const auto& c = cdf[state];
        std::size_t j = 0;
        while (j + 1 < c.size() && u >= c[j]) ++j;
        return first[state] + static_cast<int>(j);
    }
};

void run_block(const RowSampler& s, int start, int steps, std::uint64_t trials, std::uint64_t seed,
               std::vector<std::uint64_t>& counts) {
    Xoshiro256ss rng(seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
        int x = start;
        for (int n = 0; n < steps; ++n) x = s.step(x, rng.uniform());
        ++counts[x];
    }
}

}  // namespace

SimulationReport simulate(const Matrix<double>& P, int start, int steps, std::uint64_t trials, std::uint64_t seed,
                          int workers) {
    const std::size_t n = P.size();
    if (n == 0) throw InvalidInput("P: empty matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (P[i].size() != n) throw InvalidInput("P: not square");
        double sum = 0;
        for (double v : P[i]) {
            if (!(v >= 0)) throw InvalidInput("P: negative entry in row " + std::to_string(i));
            sum += v;
        }
        if (std::abs(sum - 1) > 1e-10) throw InvalidInput("P: row " + std::to_string(i) + " does not sum to 1");
    }
    if (start < 0 || start >= static_cast<int>(n)) throw InvalidInput("start: state outside the chain");
    if (steps < 0) throw InvalidInput("steps: must be >= 0");
    if (trials < 1) throw InvalidInput("trials: must be >= 1");
    if (workers < 1) throw InvalidInput("workers: must be >= 1");

    const RowSampler sampler(P);
    SimulationReport r;
    r.start = start;
    r.steps = steps;
    r.trials = trials;
    r.seed = seed;
    r.workers = workers;
    r.counts.assign(n, 0);
    if (workers == 1) {
        run_block(sampler, start, steps, trials, seed, r.counts);
    } else {
        std::vector<std::vector<std::uint64_t>> part(static_cast<std::size_t>(workers), std::vector<std::uint64_t>(n, 0));
        std::vector<std::thread> pool;
        const std::uint64_t w_count = static_cast<std::uint64_t>(workers);
        for (std::uint64_t w = 0; w < w_count; ++w) {
            const std::uint64_t share = trials / w_count + (w < trials % w_count ? 1 : 0);
            pool.emplace_back(run_block, std::cref(sampler), start, steps, share, derive_seed(seed, w), std::ref(part[w]));
        }
        for (auto& t : pool) t.join();
        for (const auto& c : part)
            for (std::size_t j = 0; j < n; ++j) r.counts[j] += c[j];
    }
    r.empirical.resize(n);
    for (std::size_t j = 0; j < n; ++j) r.empirical[j] = static_cast<double>(r.counts[j]) / static_cast<double>(trials);
    return r;
}

void attach_reference(SimulationReport& r, const std::vector<double>& reference) {
    if (reference.size() != r.empirical.size()) throw InvalidInput("reference: length differs from the state count");
    r.reference = reference;
    r.z_scores.resize(reference.size());
    r.max_abs_z = 0;
    for (std::size_t j = 0; j < reference.size(); ++j) {
        const double q = reference[j];
        const double var = q * (1 - q) / static_cast<double>(r.trials);
        const double d = r.empirical[j] - q;
        double z;
        if (var > 0) z = d / std::sqrt(var);
        else z = std::abs(d) < 1e-15 ? 0.0 : std::numeric_limits<double>::infinity();
        r.z_scores[j] = z;
        r.max_abs_z = std::max(r.max_abs_z, std::abs(z));
    }
}

}  // namespace multihess
