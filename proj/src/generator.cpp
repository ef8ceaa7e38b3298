#include "multihess/generator.hpp"

#include "multihess/errors.hpp"
#include "multihess/real.hpp"
#include "multihess/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace multihess {

namespace {

void check_p(int p) {
    if (p < 1) throw InvalidInput("p: must be a positive integer, got " + std::to_string(p));
}

void check_positive(const std::vector<double>& v, const std::string& field) {
    if (v.empty()) throw InvalidInput(field + ": empty sequence");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0) || !std::isfinite(v[i]))
            throw InvalidInput(field + ": alpha_" + std::to_string(i + 1) +
                               " must be positive and finite");
    }
}

double number_field(const nlohmann::json& j, const char* name, const std::string& where) {
    if (!j.contains(name)) throw InvalidInput(where + "." + name + ": missing");
    if (!j.at(name).is_number()) throw InvalidInput(where + "." + name + ": expected a number");
    return j.at(name).get<double>();
}

std::vector<double> number_list(const nlohmann::json& j, const char* name, const std::string& where) {
    if (!j.contains(name)) throw InvalidInput(where + "." + name + ": missing");
    const auto& a = j.at(name);
    if (!a.is_array()) throw InvalidInput(where + "." + name + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : a) {
        if (!x.is_number()) throw InvalidInput(where + "." + name + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

GeneratorSequence GeneratorSequence::list(int p, std::vector<double> alphas) {
    check_p(p);
    check_positive(alphas, "alphas.values");
    GeneratorSequence g(p, Kind::List);
    g.values_ = std::move(alphas);
    return g;
}

GeneratorSequence GeneratorSequence::constant(int p, double value) {
    check_p(p);
    if (!(value > 0) || !std::isfinite(value)) throw InvalidInput("alphas.value: must be positive and finite");
    GeneratorSequence g(p, Kind::Constant);
    g.values_ = {value};
    return g;
}

GeneratorSequence GeneratorSequence::periodic(int p, std::vector<double> period) {
    check_p(p);
    check_positive(period, "alphas.period");
    GeneratorSequence g(p, Kind::Periodic);
    g.values_ = std::move(period);
    return g;
}

GeneratorSequence GeneratorSequence::uniform(int p, double lo, double hi, std::uint64_t seed) {
    check_p(p);
    if (!(lo > 0) || !std::isfinite(lo)) throw InvalidInput("alphas.lo: must be positive");
    if (!(hi >= lo) || !std::isfinite(hi)) throw InvalidInput("alphas.hi: must be finite and >= lo");
    GeneratorSequence g(p, Kind::Uniform);
    g.lo_ = lo;
    g.hi_ = hi;
    g.seed_ = seed;
    return g;
}

GeneratorSequence GeneratorSequence::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidInput("generator: expected a JSON object");
    if (!j.contains("p")) throw InvalidInput("p: missing");
    if (!j.at("p").is_number_integer()) throw InvalidInput("p: expected an integer");
    const int p = j.at("p").get<int>();
    if (!j.contains("alphas")) throw InvalidInput("alphas: missing");
    const auto& a = j.at("alphas");
    if (!a.is_object()) throw InvalidInput("alphas: expected an object with a \"kind\" field");
    if (!a.contains("kind") || !a.at("kind").is_string()) throw InvalidInput("alphas.kind: missing or not a string");
    const auto kind = a.at("kind").get<std::string>();
    if (kind == "list") return list(p, number_list(a, "values", "alphas"));
    if (kind == "constant") return constant(p, number_field(a, "value", "alphas"));
    if (kind == "periodic") return periodic(p, number_list(a, "period", "alphas"));
    if (kind == "uniform") {
        const double lo = number_field(a, "lo", "alphas");
        const double hi = number_field(a, "hi", "alphas");
        if (!a.contains("seed") || !a.at("seed").is_number_integer())
            throw InvalidInput("alphas.seed: missing or not an integer");
        return uniform(p, lo, hi, a.at("seed").get<std::uint64_t>());
    }
    throw InvalidInput("alphas.kind: unknown kind \"" + kind + "\" (list|constant|periodic|uniform)");
}

nlohmann::ordered_json GeneratorSequence::to_json() const {
    nlohmann::ordered_json a;
    switch (kind_) {
    case Kind::List: a["kind"] = "list"; a["values"] = values_; break;
    case Kind::Constant: a["kind"] = "constant"; a["value"] = values_[0]; break;
    case Kind::Periodic: a["kind"] = "periodic"; a["period"] = values_; break;
    case Kind::Uniform:
        a["kind"] = "uniform";
        a["lo"] = lo_;
        a["hi"] = hi_;
        a["seed"] = seed_;
        break;
    }
    nlohmann::ordered_json j;
    j["p"] = p_;
    j["alphas"] = a;
    return j;
}

double GeneratorSequence::alpha(std::size_t i) const {
    if (i == 0) throw InvalidInput("alpha index is 1-based");
    switch (kind_) {
    case Kind::List:
        if (i > values_.size())
            throw InvalidInput("generator too short: alpha_" + std::to_string(i) + " requested, list has " +
                               std::to_string(values_.size()));
        return values_[i - 1];
    case Kind::Constant: return values_[0];
    case Kind::Periodic: return values_[(i - 1) % values_.size()];
    case Kind::Uniform: {
        // random access: u_i = mix(seed + i * golden)
        const double u = unit_double(splitmix64_mix(seed_ + 0x9E3779B97F4A7C15ULL * i));
        return lo_ + (hi_ - lo_) * u;
    }
    }
    return 0;
}

std::optional<std::size_t> GeneratorSequence::length() const {
    if (kind_ == Kind::List) return values_.size();
    return std::nullopt;
}

double GeneratorSequence::upper_bound() const {
    switch (kind_) {
    case Kind::List:
    case Kind::Periodic: return *std::max_element(values_.begin(), values_.end());
    case Kind::Constant: return values_[0];
    case Kind::Uniform: return hi_;
    }
    return 0;
}

std::size_t GeneratorSequence::required_for(int N) const {
    return 1 + static_cast<std::size_t>(p_ + 1) * static_cast<std::size_t>(N);
}

void GeneratorSequence::require(std::size_t count) const {
    if (kind_ == Kind::List && values_.size() < count)
        throw InvalidInput("generator too short: " + std::to_string(count) + " alphas required, list has " +
                           std::to_string(values_.size()));
}

int GeneratorSequence::max_order() const {
    if (kind_ != Kind::List) return std::numeric_limits<int>::max() / (p_ + 2);
    if (values_.empty()) return -1;
    return static_cast<int>((values_.size() - 1) / static_cast<std::size_t>(p_ + 1));
}

template <class R> std::vector<R> alpha_vector(const GeneratorSequence& gen, std::size_t count) {
    gen.require(count);
    std::vector<R> a(count);
    for (std::size_t i = 0; i < count; ++i) a[i] = R(gen.alpha(i + 1));
    return a;
}

template std::vector<double> alpha_vector<double>(const GeneratorSequence&, std::size_t);
template std::vector<extended> alpha_vector<extended>(const GeneratorSequence&, std::size_t);

}  // namespace multihess
