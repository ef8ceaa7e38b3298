#include "multihess/cli.hpp"

#include "multihess/errors.hpp"
#include "multihess/generator.hpp"
#include "multihess/initial.hpp"
#include "multihess/io.hpp"
#include "multihess/linalg.hpp"
#include "multihess/markov.hpp"
#include "multihess/montecarlo.hpp"
#include "multihess/polynomials.hpp"
#include "multihess/quadrature.hpp"
#include "multihess/real.hpp"
#include "multihess/rng.hpp"
#include "multihess/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace multihess::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Flags given on the command line; each overrides the config key of the same name.
struct Flags {
    std::string config, out;
    std::optional<int> N, nodes, measure, steps, from, to, workers, rows;
    std::optional<std::string> kind, semi_orders, x;
    std::optional<double> s;
    std::optional<std::uint64_t> trials, seed;
};

struct RunConfig {
    std::string command;
    std::optional<GeneratorSequence> gen;
    Matrix<double> C;
    bool allow_negative_C = false;
    Precision precision = Precision::Double;
    int N = -1, nodes = -1, measure = 1, steps = 10, from = 0, to = 0, workers = 1, rows = -1;
    ChainKind kind = ChainKind::II;
    std::optional<double> s;
    std::uint64_t trials = 100000, seed = 42;
    std::vector<int> semi_orders;
    std::vector<double> xs;
    std::string out_dir;
};

struct Result {
    ojson json;
    std::map<std::string, std::string> files;
    int code = Ok;
};

const char* const kKnownKeys[] = {"generator", "p",     "alphas", "C",    "allow_negative_C", "precision",
                                  "N",         "nodes", "measure", "kind", "steps",            "from",
                                  "to",        "s",     "trials", "seed", "workers",          "semi_orders",
                                  "rows",      "x"};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

int json_int(const nlohmann::json& cfg, const char* key) {
    const auto& v = cfg.at(key);
    if (!v.is_number_integer()) throw InvalidInput(std::string(key) + ": expected an integer");
    return v.get<int>();
}

template <class T> T pick(const std::optional<T>& flag, const nlohmann::json& cfg, const char* key, T fallback) {
    if (flag) return *flag;
    if (!cfg.contains(key)) return fallback;
    if constexpr (std::is_same_v<T, int>) {
        return json_int(cfg, key);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        const auto& v = cfg.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw InvalidInput(std::string(key) + ": expected a nonnegative integer");
        return v.get<std::uint64_t>();
    } else if constexpr (std::is_same_v<T, double>) {
        const auto& v = cfg.at(key);
        if (!v.is_number()) throw InvalidInput(std::string(key) + ": expected a number");
        return v.get<double>();
    } else {
        const auto& v = cfg.at(key);
        if (!v.is_string()) throw InvalidInput(std::string(key) + ": expected a string");
        return v.get<std::string>();
    }
}

void require_range(int v, int lo, int hi, const char* key) {
    if (v < lo || v > hi)
        throw InvalidInput(std::string(key) + ": " + std::to_string(v) + " outside " + std::to_string(lo) + ".." +
                           std::to_string(hi));
}

Matrix<double> parse_C(const nlohmann::json& cfg, int p) {
    if (!cfg.contains("C")) return linalg::identity<double>(static_cast<std::size_t>(p));
    const auto& c = cfg.at("C");
    if (!c.is_array()) throw InvalidInput("C: expected an array of rows");
    Matrix<double> C;
    for (const auto& row : c) {
        if (!row.is_array()) throw InvalidInput("C: expected an array of rows");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number()) throw InvalidInput("C: entries must be numbers");
            r.push_back(v.get<double>());
        }
        C.push_back(r);
    }
    validate_C(C, p, cfg.value("allow_negative_C", false));
    return C;
}

nlohmann::json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw InvalidInput("config: JSON parse error at line " + std::to_string(line) + ", column " +
                           std::to_string(col));
    }
}

RunConfig resolve(const std::string& command, const Flags& f) {
    RunConfig rc;
    rc.command = command;
    rc.out_dir = f.out;
    const auto cfg = read_config(f.config);
    if (!cfg.is_object()) throw InvalidInput("config: expected a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
        if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), it.key()) == std::end(kKnownKeys))
            throw InvalidInput(it.key() + ": unknown config field");

    rc.gen = GeneratorSequence::from_json(cfg.contains("generator") ? cfg.at("generator") : cfg);
    const int p = rc.gen->p();
    if (cfg.contains("allow_negative_C") && !cfg.at("allow_negative_C").is_boolean())
        throw InvalidInput("allow_negative_C: expected true or false");
    rc.allow_negative_C = cfg.value("allow_negative_C", false);
    rc.C = parse_C(cfg, p);

    std::string precision = pick<std::string>(std::nullopt, cfg, "precision", "double");
    if (const char* env = std::getenv("MULTIHESS_PRECISION"); env && *env) {
        try {
            rc.precision = parse_precision(env);
        } catch (const InvalidInput&) {
            throw InvalidInput("MULTIHESS_PRECISION: expected \"double\" or \"extended\"");
        }
    } else {
        rc.precision = parse_precision(precision);
    }

    const int max_N = std::min(rc.gen->max_order(), 2000);
    rc.N = pick(f.N, cfg, "N", -1);
    if (command != "quadrature") {
        if (rc.N < 0 && !f.N && !cfg.contains("N")) throw InvalidInput("N: missing");
        require_range(rc.N, 0, max_N, "N");
    }
    if (command == "quadrature") {
        rc.nodes = pick(f.nodes, cfg, "nodes", -1);
        if (rc.nodes < 0) throw InvalidInput("nodes: missing");
        require_range(rc.nodes, 1, max_N + 1, "nodes");
        rc.measure = pick(f.measure, cfg, "measure", 1);
        require_range(rc.measure, 1, p, "measure");
    }
    if (command == "chain" || command == "simulate") {
        rc.kind = parse_kind(pick<std::string>(f.kind, cfg, "kind", "II"));
        rc.steps = pick(f.steps, cfg, "steps", 10);
        require_range(rc.steps, 0, 1000000, "steps");
        rc.from = pick(f.from, cfg, "from", 0);
        require_range(rc.from, 0, rc.N, "from");
        rc.to = pick(f.to, cfg, "to", 0);
        require_range(rc.to, 0, rc.N, "to");
    }
    if (command == "chain") {
        if (f.s || cfg.contains("s")) {
            rc.s = pick(f.s, cfg, "s", 0.0);
            if (!(std::abs(*rc.s) < 1)) throw InvalidInput("s: |s| must be < 1");
        }
        rc.rows = pick(f.rows, cfg, "rows", -1);
        if (rc.rows != -1) require_range(rc.rows, 0, max_N, "rows");
        if (f.semi_orders) {
            for (const auto& t : split_list(*f.semi_orders)) {
                try {
                    rc.semi_orders.push_back(std::stoi(t));
                } catch (const std::logic_error&) {
                    throw InvalidInput("semi_orders: \"" + t + "\" is not an integer");
                }
            }
        } else if (cfg.contains("semi_orders")) {
            if (!cfg.at("semi_orders").is_array()) throw InvalidInput("semi_orders: expected an array of integers");
            for (const auto& v : cfg.at("semi_orders")) {
                if (!v.is_number_integer()) throw InvalidInput("semi_orders: expected an array of integers");
                rc.semi_orders.push_back(v.get<int>());
            }
        }
        for (int n : rc.semi_orders) require_range(n, 0, max_N / 2, "semi_orders");
    }
    if (command == "simulate") {
        rc.trials = pick(f.trials, cfg, "trials", std::uint64_t(100000));
        if (rc.trials < 1) throw InvalidInput("trials: must be >= 1");
        rc.workers = pick(f.workers, cfg, "workers", 1);
        require_range(rc.workers, 1, 256, "workers");
    }
    if (command == "simulate" || command == "verify") rc.seed = pick(f.seed, cfg, "seed", std::uint64_t(42));
    if (command == "poly") {
        if (f.x) {
            for (const auto& t : split_list(*f.x)) {
                try {
                    rc.xs.push_back(std::stod(t));
                } catch (const std::logic_error&) {
                    throw InvalidInput("x: \"" + t + "\" is not a number");
                }
            }
        } else if (cfg.contains("x")) {
            const auto& v = cfg.at("x");
            if (v.is_number()) rc.xs.push_back(v.get<double>());
            else if (v.is_array()) {
                for (const auto& e : v) {
                    if (!e.is_number()) throw InvalidInput("x: expected numbers");
                    rc.xs.push_back(e.get<double>());
                }
            } else {
                throw InvalidInput("x: expected a number or an array of numbers");
            }
        }
        if (rc.xs.empty()) throw InvalidInput("x: missing");
    }
    return rc;
}

template <class R> Matrix<R> cast_matrix(const Matrix<double>& M) {
    Matrix<R> out;
    for (const auto& row : M) out.emplace_back(row.begin(), row.end());
    return out;
}

template <class R> ojson to_json_vec(const std::vector<R>& v) {
    ojson a = ojson::array();
    for (const auto& x : v) a.push_back(to_double(x));
    return a;
}

template <class R> ojson to_json_mat(const Matrix<R>& M) {
    ojson a = ojson::array();
    for (const auto& row : M) a.push_back(to_json_vec(row));
    return a;
}

ojson header(const RunConfig& rc) {
    ojson j;
    j["command"] = rc.command;
    j["arithmetic"] = precision_name(rc.precision);
    j["generator"] = rc.gen->to_json();
    return j;
}

template <class R> InitialConditionData<R> initial(const RunConfig& rc) {
    return initial_conditions<R>(*rc.gen, cast_matrix<R>(rc.C), rc.allow_negative_C);
}

template <class R> R min_weight(const SpectralDecomposition<R>& sd) {
    R m = sd.mu[0][0];
    for (const auto& row : sd.mu)
        for (const auto& v : row) m = std::min(m, v);
    return m;
}

template <class R> Result spectrum(const RunConfig& rc) {
    const auto ic = initial<R>(rc);
    const auto sd = decomposition(*rc.gen, ic, rc.N);
    const int p = rc.gen->p();
    Result r;
    r.json = header(rc);
    r.json["p"] = p;
    r.json["N"] = rc.N;
    r.json["eigenvalues"] = to_json_vec(sd.lambda);
    r.json["weights"] = to_json_mat(sd.mu);
    r.json["total_mass"] = to_json_vec(ic.nu_inv_top_row);
    ojson d;
    d["min_level_gap"] = to_double(sd.min_level_gap);
    d["min_interlace_gap"] = to_double(sd.min_interlace_gap);
    d["interlace_ties"] = sd.interlace_ties;
    d["count_fallbacks"] = sd.count_fallbacks;
    d["uw_residual"] = to_double(sd.uw_residual);
    d["biorthogonality_residual"] = to_double(biorthogonality_residual(*rc.gen, ic, sd));
    d["min_weight"] = to_double(min_weight(sd));
    d["weights_positive"] = min_weight(sd) > R(0);
    r.json["diagnostics"] = d;

    std::ostringstream csv;
    csv << "k,lambda";
    for (int a = 1; a <= p; ++a) csv << ",mu_" << a;
    csv << "\n";
    for (std::size_t k = 0; k < sd.lambda.size(); ++k) {
        csv << k << "," << format_double(to_double(sd.lambda[k]));
        for (const auto& m : sd.mu[k]) csv << "," << format_double(to_double(m));
        csv << "\n";
    }
    r.files["spectrum.csv"] = csv.str();
    std::ostringstream mat;
    write_matrix_csv(mat, assemble_truncation<R>(*rc.gen, rc.N).dense());
    r.files["matrix.csv"] = mat.str();
    return r;
}

template <class R> Result quadrature(const RunConfig& rc) {
    const auto ic = initial<R>(rc);
    const int N = rc.nodes - 1;
    const auto rule = gauss_rule(*rc.gen, ic, N, rc.measure);
    const auto sharp = sharpness_check(*rc.gen, ic, N, rc.measure);
    Result r;
    r.json = header(rc);
    r.json["p"] = rc.gen->p();
    r.json["nodes"] = rc.nodes;
    r.json["measure"] = rc.measure;
    r.json["precision"] = sharp.precision;
    r.json["exact_through"] = sharp.exact_through;
    r.json["remainder"] = sharp.remainder_at_next;
    r.json["scan_exact_through"] = sharp.scan_exact_through;
    r.json["max_scaled_diff"] = sharp.max_scaled_diff;
    r.json["consistent"] = sharp.consistent();
    ojson rj;
    rj["nodes"] = to_json_vec(rule.nodes);
    rj["weights"] = to_json_vec(rule.weights);
    r.json["rule"] = rj;
    std::ostringstream csv;
    csv << "k,node,weight\n";
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        csv << k << "," << format_double(to_double(rule.nodes[k])) << "," << format_double(to_double(rule.weights[k]))
            << "\n";
    r.files["quadrature.csv"] = csv.str();
    return r;
}

ojson recurrence_json(const RecurrenceReport& rep) {
    ojson j;
    j["mode"] = rep.mode;
    j["classification"] = classification_name(rep.classification);
    j["heuristic"] = rep.heuristic;
    if (rep.mode == "finite") {
        ojson states = ojson::array();
        for (const auto& f : rep.finite) {
            ojson s;
            s["state"] = f.state;
            s["s"] = f.s;
            s["F"] = f.F;
            s["monotone"] = f.monotone;
            s["gap_at_last"] = f.gap_at_last;
            states.push_back(s);
        }
        j["states"] = states;
    } else {
        j["assumes_eta_one"] = rep.assumes_eta_one;
        j["orders"] = rep.orders;
        j["integral"] = rep.integral;
        j["top_eigenvalue"] = rep.top_eigenvalue;
        j["masses"] = rep.masses;
        j["F_ratios"] = rep.F_ratios;
        j["ergodic"] = rep.ergodic;
        j["stationary"] = rep.stationary;
        j["stationary_partial_sum"] = rep.stationary_partial_sum;
        j["stable_under_doubling"] = rep.stable_under_doubling;
    }
    j["note"] = rep.note;
    return j;
}

template <class R> Result chain(const RunConfig& rc) {
    using std::abs;
    const auto ic = initial<R>(rc);
    const auto c = analyze_chain(*rc.gen, ic, rc.N);
    const auto P = monic_to_stochastic(c, *rc.gen, rc.kind);
    const auto km = km_row(c, rc.steps, rc.from, rc.kind);
    const auto direct = power_row(P, rc.steps, rc.from);
    Result r;
    r.json = header(rc);
    r.json["p"] = rc.gen->p();
    r.json["N"] = rc.N;
    r.json["kind"] = kind_name(rc.kind);
    r.json["steps"] = rc.steps;
    r.json["from"] = rc.from;
    r.json["to"] = rc.to;
    r.json["lambda1"] = to_double(c.lambda1);
    r.json["km"] = to_double(km[rc.to]);
    r.json["direct"] = to_double(direct[rc.to]);
    r.json["km_row"] = to_json_vec(km);
    r.json["direct_row"] = to_json_vec(direct);
    r.json["stationary"] = to_json_vec(c.stationary);

    R km_diff(0), km_sum(0), st_sum(0), st_res(0), tables(0);
    for (int l = 0; l <= rc.N; ++l) {
        km_diff = std::max(km_diff, R(abs(km[l] - direct[l])));
        km_sum += km[l];
        st_sum += c.stationary[l];
    }
    for (int j = 0; j <= rc.N; ++j) {
        R s(0);
        for (int i = 0; i <= rc.N; ++i) s += c.stationary[i] * P.P[i][j];
        st_res = std::max(st_res, R(abs(s - c.stationary[j])));
    }
    const auto alt = stationary_from_tables(c);
    for (int n = 0; n <= rc.N; ++n) tables = std::max(tables, R(abs(alt[n] - c.stationary[n])));

    if (rc.s) {
        const R s(*rc.s);
        const auto g = generating_functions(c, s, rc.from, rc.to, rc.kind);
        const auto series = generating_series(P, s, rc.from, rc.to, 1e-12);
        ojson gj;
        gj["s"] = *rc.s;
        gj["P"] = to_double(g.P);
        gj["F"] = to_double(g.F);
        gj["series"] = to_double(series.series);
        gj["series_terms"] = series.n_max + 1;
        gj["tail_bound"] = to_double(series.tail_bound);
        r.json["generating"] = gj;
    }
    r.json["recurrence"] = recurrence_json(recurrence_finite(c));
    if (!rc.semi_orders.empty()) {
        const auto rep = recurrence_semi(*rc.gen, ic, rc.semi_orders);
        r.json["semi"] = recurrence_json(rep);
        if (rc.rows >= 0) {
            std::ostringstream os2;
            write_stochastic_csv(os2, semi_stochastic_II<R>(*rc.gen, rc.rows));
            r.files["semi_II.csv"] = os2.str();
            if (!rep.F_ratios.empty()) {
                std::vector<R> F(rep.F_ratios.back().begin(), rep.F_ratios.back().end());
                std::ostringstream os1;
                write_stochastic_csv(os1, semi_stochastic_I<R>(*rc.gen, ic, F, rc.rows));
                r.files["semi_I.csv"] = os1.str();
            }
        }
    }

    ojson d;
    d["row_deviation"] = to_double(P.max_row_deviation());
    d["min_entry"] = to_double(P.min_entry());
    d["km_direct_max_diff"] = to_double(km_diff);
    d["km_row_sum"] = to_double(km_sum);
    d["stationary_sum"] = to_double(st_sum);
    d["stationary_residual"] = to_double(st_res);
    d["stationary_tables_diff"] = to_double(tables);
    d["uw_residual"] = to_double(c.base.uw_residual);
    d["biorthogonality_residual"] = to_double(biorthogonality_residual(*rc.gen, ic, c.base));
    r.json["diagnostics"] = d;

    std::ostringstream csv;
    write_stochastic_csv(csv, P);
    r.files["chain.csv"] = csv.str();
    return r;
}

template <class R> Result simulate_cmd(const RunConfig& rc) {
    const auto ic = initial<R>(rc);
    const auto c = analyze_chain(*rc.gen, ic, rc.N);
    const auto P = monic_to_stochastic(c, *rc.gen, rc.kind);
    Matrix<double> Pd;
    for (const auto& row : P.P) Pd.push_back(to_json_vec(row).template get<std::vector<double>>());
    auto rep = simulate(Pd, rc.from, rc.steps, rc.trials, rc.seed, rc.workers);
    attach_reference(rep, to_json_vec(km_row(c, rc.steps, rc.from, rc.kind)).template get<std::vector<double>>());
    Result r;
    r.json = header(rc);
    r.json["p"] = rc.gen->p();
    r.json["N"] = rc.N;
    r.json["kind"] = kind_name(rc.kind);
    r.json["start"] = rep.start;
    r.json["steps"] = rep.steps;
    r.json["trials"] = rep.trials;
    r.json["seed"] = rep.seed;
    r.json["workers"] = rep.workers;
    r.json["counts"] = rep.counts;
    r.json["empirical"] = rep.empirical;
    r.json["reference"] = rep.reference;
    r.json["z_scores"] = rep.z_scores;
    r.json["max_abs_z"] = rep.max_abs_z;
    return r;
}

template <class R> Result verify(const RunConfig& rc) {
    using std::abs;
    const auto& gen = *rc.gen;
    const int p = gen.p(), N = rc.N;
    const auto ic = initial<R>(rc);
    const auto sd = decomposition(gen, ic, N);
    ojson checks = ojson::array();
    bool ok = true;
    auto add = [&](const char* name, double value, double limit) {
        const bool pass = value <= limit;
        ok = ok && pass;
        ojson c;
        c["name"] = name;
        c["value"] = value;
        c["limit"] = limit;
        c["pass"] = pass;
        checks.push_back(c);
    };
    const bool ext = rc.precision == Precision::Extended;
    add("biorthogonality", to_double(biorthogonality_residual(gen, ic, sd)), ext ? 1e-12 : 1e-8);

    const auto T = assemble_truncation<R>(gen, N + p);
    Xoshiro256ss rng(rc.seed);
    const double top = to_double(sd.lambda[0]) * 1.1;
    double cd = 0, det = 0;
    for (int i = 0; i < 20; ++i) {
        const double x = rng.uniform() * top;
        double y = rng.uniform() * top;
        if (y == x) y += 0.5;
        cd = std::max(cd, to_double(verify_cd(T, ic, N, R(x), R(y)).worst_relative()));
        for (int n = 0; n <= N; ++n) {
            const auto dr = verify_determinantal(T, ic, n, R(x));
            det = std::max(det, to_double(R(dr.residual / std::max(dr.scale, R(1e-300)))));
        }
    }
    add("christoffel_darboux", cd, 1e-9);
    add("determinantal", det, 1e-9);

    if (!rc.allow_negative_C) add("weights_negative_part", std::max(0.0, -to_double(min_weight(sd))), 0.0);

    const auto S = to_stochastic<R>(gen, N);
    const auto back = to_monic(*S.factors, S.scale);
    const auto a0 = alpha_vector<double>(gen, gen.required_for(N));
    const auto a1 = alpha_vector<double>(back.gen, gen.required_for(N));
    double rt = 0;
    for (std::size_t i = 0; i < a0.size(); ++i) rt = std::max(rt, std::abs(a1[i] - a0[i]) / std::abs(a0[i]));
    add("bridge_monic_round_trip", rt, 1e-10);
    const auto S2 = to_stochastic<R>(back.gen, N);
    R rt2(0);
    auto cmp = [&](const std::vector<R>& u, const std::vector<R>& v) {
        for (std::size_t i = 0; i < u.size(); ++i) rt2 = std::max(rt2, R(abs(u[i] - v[i]) / abs(u[i])));
    };
    for (int a = 0; a < p; ++a) {
        cmp(S.factors->lower_diag[a], S2.factors->lower_diag[a]);
        std::vector<R> u(S.factors->lower_sub[a].begin() + 1, S.factors->lower_sub[a].end());
        std::vector<R> v(S2.factors->lower_sub[a].begin() + 1, S2.factors->lower_sub[a].end());
        cmp(u, v);
    }
    cmp(S.factors->upper_diag, S2.factors->upper_diag);
    cmp(S.factors->upper_super, S2.factors->upper_super);
    add("bridge_factor_round_trip", to_double(rt2), 1e-10);
    add("factor_row_deviation", to_double(S.factors->max_row_deviation()), 1e-12);

    Result r;
    r.json = header(rc);
    r.json["p"] = p;
    r.json["N"] = N;
    r.json["checks"] = checks;
    r.json["passed"] = ok;
    r.code = ok ? Ok : VerificationFailure;
    return r;
}

template <class R> Result poly(const RunConfig& rc) {
    const auto ic = initial<R>(rc);
    Result r;
    r.json = header(rc);
    r.json["p"] = rc.gen->p();
    r.json["N"] = rc.N;
    ojson points = ojson::array();
    std::ostringstream csv;
    csv << "n,x,B,dB\n";
    for (double x : rc.xs) {
        const auto ev = evaluate_all(*rc.gen, ic, rc.N, R(x));
        ojson pj;
        pj["x"] = x;
        pj["B"] = to_json_vec(ev.typeII);
        pj["dB"] = to_json_vec(ev.typeII_deriv);
        pj["A"] = to_json_mat(ev.typeI);
        pj["truncated"] = to_json_vec(ev.truncated);
        pj["second_kind"] = to_json_vec(ev.second_kind);
        pj["h"] = to_json_vec(ev.h);
        points.push_back(pj);
        for (std::size_t n = 0; n < ev.typeII.size(); ++n)
            csv << n << "," << format_double(x) << "," << format_double(to_double(ev.typeII[n])) << ","
                << format_double(to_double(ev.typeII_deriv[n])) << "\n";
    }
    r.json["points"] = points;
    r.files["poly.csv"] = csv.str();
    return r;
}

template <class R> Result dispatch(const RunConfig& rc) {
    if (rc.command == "spectrum") return spectrum<R>(rc);
    if (rc.command == "quadrature") return quadrature<R>(rc);
    if (rc.command == "chain") return chain<R>(rc);
    if (rc.command == "simulate") return simulate_cmd<R>(rc);
    if (rc.command == "verify") return verify<R>(rc);
    return poly<R>(rc);
}

void write_files(const RunConfig& rc, const Result& r, const std::string& json_text) {
    if (rc.out_dir.empty()) return;
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(rc.out_dir, ec);
    if (ec) throw InvalidInput("out: cannot create directory " + rc.out_dir);
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream f(fs::path(rc.out_dir) / name, std::ios::binary);
        if (!f) throw InvalidInput("out: cannot write " + name);
        f << text;
    };
    put(rc.command + ".json", json_text);
    for (const auto& [name, text] : r.files) put(name, text);
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON configuration")->required();
    sub->add_option("--out", f.out, "directory for JSON and CSV artifacts");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Banded Hessenberg spectral toolkit"};
    app.require_subcommand(1);
    Flags f;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and Christoffel weights of T^[N]");
    add_common(spectrum_cmd, f);
    spectrum_cmd->add_option("--N", f.N, "truncation order");

    auto* quad = app.add_subcommand("quadrature", "multiple Gauss rule and its degree of precision");
    add_common(quad, f);
    quad->add_option("--nodes", f.nodes, "number of nodes");
    quad->add_option("--measure", f.measure, "measure index 1..p");

    auto* ch = app.add_subcommand("chain", "finite Markov chain: transition probabilities, stationary state, recurrence");
    add_common(ch, f);
    ch->add_option("--N", f.N, "truncation order");
    ch->add_option("--kind", f.kind, "I or II");
    ch->add_option("--steps", f.steps, "number of steps");
    ch->add_option("--from", f.from, "start state");
    ch->add_option("--to", f.to, "target state");
    ch->add_option("--s", f.s, "generating function argument, |s| < 1");
    ch->add_option("--semi-orders", f.semi_orders, "comma separated truncation orders for the semi-infinite trend");
    ch->add_option("--rows", f.rows, "rows of the semi-infinite matrices to export");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo trajectories against the spectral probabilities");
    add_common(sim, f);
    sim->add_option("--N", f.N, "truncation order");
    sim->add_option("--kind", f.kind, "I or II");
    sim->add_option("--steps", f.steps, "number of steps");
    sim->add_option("--from", f.from, "start state");
    sim->add_option("--trials", f.trials, "number of trajectories");
    sim->add_option("--seed", f.seed, "random seed");
    sim->add_option("--workers", f.workers, "worker threads");

    auto* ver = app.add_subcommand("verify", "identity suite; exit 4 on any breach");
    add_common(ver, f);
    ver->add_option("--N", f.N, "truncation order");
    ver->add_option("--seed", f.seed, "seed for the sample points");

    auto* pol = app.add_subcommand("poly", "recurrence polynomial values at given points");
    add_common(pol, f);
    pol->add_option("--N", f.N, "truncation order");
    pol->add_option("--x", f.x, "comma separated points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return Ok;
        }
        err << "error: " << e.what() << "\n";
        return ConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const RunConfig rc = resolve(command, f);
        const Result r = rc.precision == Precision::Extended ? dispatch<extended>(rc) : dispatch<double>(rc);
        const std::string text = dump_json(r.json) + "\n";
        write_files(rc, r, text);
        out << text;
        if (r.code == VerificationFailure) err << "verification failed\n";
        return r.code;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return ConfigError;
    } catch (const NumericError& e) {
        ojson d;
        d["error"] = "numeric";
        d["kind"] = e.kind();
        d["message"] = e.what();
        d["context"] = e.context();
        out << dump_json(d) << "\n";
        err << "numeric failure: " << e.what() << "\n";
        return NumericFailure;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("multihess");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace multihess::cli
