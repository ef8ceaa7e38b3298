#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace multihess {

// Positive sequence alpha_1, alpha_2, ... (1-based) and band width p.
class GeneratorSequence {
public:
    enum class Kind { List, Constant, Periodic, Uniform };

    static GeneratorSequence list(int p, std::vector<double> alphas);
    static GeneratorSequence constant(int p, double value);
    static GeneratorSequence periodic(int p, std::vector<double> period);
    static GeneratorSequence uniform(int p, double lo, double hi, std::uint64_t seed);

    // {"p": int, "alphas": {"kind": ..., ...}}
    static GeneratorSequence from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;

    int p() const { return p_; }
    Kind kind() const { return kind_; }

    // alpha_i, i >= 1
    double alpha(std::size_t i) const;
    // nullopt for rule-based (unbounded) sequences
    std::optional<std::size_t> length() const;
    double upper_bound() const;

    // Number of alphas T^[N] consumes: 1 + (p+1)N.
    std::size_t required_for(int N) const;
    // Throws InvalidInput naming the count when the sequence is too short.
    void require(std::size_t count) const;
    // Largest N with required_for(N) available (very large for rules).
    int max_order() const;

private:
    GeneratorSequence(int p, Kind kind) : p_(p), kind_(kind) {}

    int p_;
    Kind kind_;
    std::vector<double> values_;  // list or period
    double lo_ = 0, hi_ = 0;
    std::uint64_t seed_ = 0;
};

// alpha_1 .. alpha_count as R, 0-based storage (a[i-1] = alpha_i).
template <class R> std::vector<R> alpha_vector(const GeneratorSequence& gen, std::size_t count);

}  // namespace multihess
