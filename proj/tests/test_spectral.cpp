#include "oracles.hpp"

#include "multihess/errors.hpp"
#include "multihess/initial.hpp"
#include "multihess/quadrature.hpp"
#include "multihess/real.hpp"
#include "multihess/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

using namespace multihess;

namespace {

std::vector<double> dense_eigenvalues(const oracle::Dense& T) {
    Eigen::EigenSolver<oracle::Dense> es(T, false);
    std::vector<double> ev;
    for (int i = 0; i < T.rows(); ++i) ev.push_back(es.eigenvalues()[i].real());
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("eigenvalues agree with a dense eigensolver") {
    for (int p = 1; p <= 3; ++p)
        for (int N : {0, 1, 4, 9}) {
            const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 500 + 10 * p + N);
            const auto ev = eigenvalues<double>(g, N);
            const auto ref = dense_eigenvalues(oracle::truncation(g, N));
            REQUIRE(ev.size() == ref.size());
            for (std::size_t k = 0; k < ev.size(); ++k) CHECK(ev[k] == doctest::Approx(ref[k]).epsilon(1e-9));
        }
}

TEST_CASE("golden ratio pair for the constant tridiagonal case") {
    const auto g = GeneratorSequence::constant(1, 1.0);
    const auto ev = eigenvalues<double>(g, 1);
    CHECK(ev[0] == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-15));
    CHECK(ev[1] == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-15));
    const auto ee = eigenvalues<extended>(g, 1);
    const extended golden = (extended(3) + sqrt(extended(5))) / 2;
    CHECK(abs(ee[0] - golden) < extended(1e-70));
}

TEST_CASE("levels interlace strictly") {
    const auto g = GeneratorSequence::uniform(3, 0.5, 2.0, 17);
    const auto L = eigen_levels(assemble_truncation<double>(g, 25));
    CHECK(L.min_level_gap > 0);
    CHECK(L.min_interlace_gap > 0);
    CHECK(L.interlace_ties == 0);
    for (std::size_t n = 1; n < L.roots.size(); ++n)
        for (std::size_t k = 0; k < L.roots[n - 1].size(); ++k) {
            CHECK(L.roots[n][k] > L.roots[n - 1][k]);
            CHECK(L.roots[n - 1][k] > L.roots[n][k + 1]);
        }
}

TEST_CASE("tridiagonal weights match golub welsch") {
    for (int N : {2, 6, 12}) {
        const auto g = GeneratorSequence::uniform(1, 0.5, 2.0, 600 + N);
        const auto ic = initial_conditions<double>(g);
        const auto sd = decomposition(g, ic, N);
        const auto T = oracle::truncation(g, N);
        oracle::Dense J = oracle::Dense::Zero(N + 1, N + 1);
        for (int i = 0; i <= N; ++i) {
            J(i, i) = T(i, i);
            if (i < N) J(i, i + 1) = J(i + 1, i) = std::sqrt(T(i + 1, i));
        }
        Eigen::SelfAdjointEigenSolver<oracle::Dense> es(J);
        for (int k = 0; k <= N; ++k) {
            const int col = N - k;  // ascending in Eigen
            CHECK(sd.lambda[k] == doctest::Approx(es.eigenvalues()[col]).epsilon(1e-10));
            const double w = es.eigenvectors()(0, col) * es.eigenvectors()(0, col);
            CHECK(sd.mu[k][0] == doctest::Approx(w).epsilon(1e-9));
        }
    }
}

TEST_CASE("weights are residues of the resolvent section") {
    for (int p = 2; p <= 3; ++p) {
        const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 700 + p);
        const Matrix<double> C = p == 2 ? Matrix<double>{{1, 0.6}, {0, 1}}
                                        : Matrix<double>{{1, 0.2, 0.5}, {0, 1, 0.3}, {0, 0, 1}};
        const auto ic = initial_conditions<double>(g, C);
        const int N = 7;
        const auto sd = decomposition(g, ic, N);
        const auto T = oracle::truncation(g, N);
        Eigen::EigenSolver<oracle::Dense> es(T);
        const Eigen::MatrixXcd V = es.eigenvectors();
        const Eigen::MatrixXcd Vi = V.inverse();
        for (int a = 0; a < p; ++a) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N + 1);
            for (int j = 0; j < p; ++j) e(j) = ic.nu_inv_t[j][a];
            for (int i = 0; i <= N; ++i) {
                const double lam = es.eigenvalues()[i].real();
                const auto k = std::min_element(sd.lambda.begin(), sd.lambda.end(), [&](double u, double v) {
                                   return std::abs(u - lam) < std::abs(v - lam);
                               }) - sd.lambda.begin();
                const std::complex<double> res = V(0, i) * (Vi.row(i) * e)(0);
                CHECK(sd.mu[k][a] == doctest::Approx(res.real()).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("biorthogonality and positivity") {
    for (int p = 1; p <= 3; ++p) {
        const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 800 + p);
        const auto ic = initial_conditions<double>(g);
        CHECK(verify_biorthogonality(g, ic, 8) < 1e-8);
        const auto pos = verify_positivity(g, ic.C, 8);
        CHECK(pos.positive);
        CHECK(pos.hypothesis_holds);
    }
}

TEST_CASE("extended biorthogonality at large order") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 901);
    const auto ic = initial_conditions<extended>(g);
    CHECK(verify_biorthogonality(g, ic, 30) < extended(1e-20));
}

TEST_CASE("weyl function three ways") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 41);
    const auto ic = initial_conditions<double>(g);
    const auto sd = decomposition(g, ic, 6);
    for (int a = 1; a <= 2; ++a) {
        const auto w = weyl(g, ic, sd, a, 20.0);
        CHECK(w.max_rel_diff < 1e-10);
        const auto wc = weyl(g, ic, sd, a, std::complex<double>(1.0, 0.5));
        CHECK(wc.max_rel_diff < 1e-9);
    }
    CHECK_THROWS(weyl(g, ic, sd, 1, sd.lambda[2]));
}

TEST_CASE("moments match the quadrature sums") {
    const auto g = GeneratorSequence::uniform(3, 0.5, 2.0, 42);
    const auto ic = initial_conditions<double>(g);
    const auto sd = decomposition(g, ic, 9);
    for (int n = 0; n <= 12; ++n)
        for (int a = 1; a <= 3; ++a) CHECK(moments(g, ic, sd, n, a).rel_diff < 1e-11);
}

TEST_CASE("total masses are the first row of nu inverse transpose") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 43);
    const auto ic = initial_conditions<double>(g, Matrix<double>{{1, 0.8}, {0, 1}});
    for (int N : {3, 7, 15}) {
        const auto m = measures(decomposition(g, ic, N));
        for (int a = 0; a < 2; ++a) CHECK(m.total_mass[a] == doctest::Approx(ic.nu_inv_top_row[a]).epsilon(1e-10));
        CHECK(m.psi(1, m.nodes.front() + 1) == doctest::Approx(m.total_mass[0]));
        CHECK(m.psi(1, -1.0) == 0);
    }
}

TEST_CASE("eigenvector sign changes") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 44);
    const auto ic = initial_conditions<double>(g);
    const auto sd = decomposition(g, ic, 8);
    for (std::size_t k = 0; k < sd.lambda.size(); ++k) {
        const auto s = sign_changes(sd.right[k]);
        CHECK(s.v_min == static_cast<int>(k));
        CHECK(s.v_max == static_cast<int>(k));
    }
    const auto z = sign_changes(std::vector<double>{1, 0, -1, 0, 0, 1});
    CHECK(z.v_min == 2);
    CHECK(z.v_max == 4);
}

TEST_CASE("limit estimates") {
    const auto conv = estimate_limit([](int N) { return 2.0 - 1.0 / N; }, 4, 1e-3, 4096);
    CHECK(conv.status == LimitEstimate::Status::Converged);
    CHECK(conv.value == doctest::Approx(2.0).epsilon(1e-3));
    const auto div = estimate_limit([](int N) { return std::log(static_cast<double>(N)); }, 4, 1e-3, 256);
    CHECK(div.status == LimitEstimate::Status::Inconclusive);
    CHECK(limit_status_name(div.status) == "inconclusive");
}

TEST_CASE("darboux transforms are isospectral") {
    const auto g = GeneratorSequence::uniform(3, 0.5, 2.0, 45);
    const auto ref = eigenvalues<double>(g, 10);
    for (int k = 1; k <= 3; ++k) {
        const auto ev = dense_eigenvalues(oracle::cyclic(g, 10, k));
        for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    }
}

}  // TEST_SUITE

TEST_SUITE("quadrature") {

TEST_CASE("degrees of precision") {
    for (int n = 1; n <= 10; ++n) CHECK(precision_degree(n, 1, 1) == 2 * n - 1);
    CHECK(precision_degree(3, 2, 1) == 4);
    CHECK(precision_degree(4, 2, 1) == 5);
    CHECK(precision_degree(5, 2, 1) == 7);
    CHECK(precision_degree(6, 2, 1) == 8);
    CHECK(precision_degree(3, 2, 2) == 3);
    CHECK(reference_order(8, 2, 1) == 5);
}

TEST_CASE("sharpness agrees with the formula") {
    for (int p = 1; p <= 3; ++p)
        for (int nodes = 1; nodes <= 8; ++nodes)
            for (int a = 1; a <= p; ++a) {
                const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 1000 + 100 * p + nodes);
                const auto ic = initial_conditions<double>(g);
                const auto r = sharpness_check(g, ic, nodes - 1, a);
                CHECK(r.exact_through == precision_degree(nodes, p, a));
                CHECK(r.remainder_at_next > 0);
                CHECK(r.scan_exact_through == r.exact_through);
            }
}

TEST_CASE("rule integrates monomials exactly through its degree") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 55);
    const auto ic = initial_conditions<extended>(g);
    const auto rule = gauss_rule(g, ic, 4, 1);
    CHECK(rule.precision == 7);
    for (int n = 0; n <= rule.precision; ++n) {
        const auto ref = reference_moment(g, ic, n, 1);
        CHECK(abs(rule.monomial(n) - ref) <= extended(1e-60) * abs(ref));
    }
    const auto next = reference_moment(g, ic, rule.precision + 1, 1);
    CHECK(abs(rule.monomial(rule.precision + 1) - next) > extended(1e-30) * abs(next));
}

TEST_CASE("reference moments are independent of the truncation once reachable") {
    const auto g = GeneratorSequence::uniform(3, 0.5, 2.0, 56);
    const auto ic = initial_conditions<double>(g);
    for (int n = 0; n <= 10; ++n) {
        const int M = reference_order(n, 3, 1);
        const double a = reference_moment(g, ic, n, 1, M);
        const double b = reference_moment(g, ic, n, 1, M + 5);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("measure index is validated") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 57);
    const auto ic = initial_conditions<double>(g);
    CHECK_THROWS_AS(gauss_rule(g, ic, 3, 3), InvalidInput);
    CHECK_THROWS_AS(sharpness_check(g, ic, 3, 0), InvalidInput);
}

}  // TEST_SUITE
