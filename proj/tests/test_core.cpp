#include "oracles.hpp"

#include "multihess/banded.hpp"
#include "multihess/errors.hpp"
#include "multihess/generator.hpp"
#include "multihess/initial.hpp"
#include "multihess/kernels.hpp"
#include "multihess/oscillatory.hpp"
#include "multihess/real.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace multihess;

TEST_SUITE("pbf_core") {

TEST_CASE("generator kinds and json round trip") {
    const auto c = GeneratorSequence::constant(2, 1.5);
    CHECK(c.alpha(1) == 1.5);
    CHECK(c.alpha(1000) == 1.5);
    CHECK(c.required_for(3) == 10);

    const auto per = GeneratorSequence::periodic(1, {1, 2, 3});
    CHECK(per.alpha(4) == 1);
    CHECK(per.alpha(6) == 3);

    const auto u = GeneratorSequence::uniform(3, 0.5, 2.0, 11);
    for (std::size_t i = 1; i < 200; ++i) {
        CHECK(u.alpha(i) >= 0.5);
        CHECK(u.alpha(i) <= 2.0);
    }
    const auto again = GeneratorSequence::from_json(u.to_json());
    CHECK(again.alpha(17) == u.alpha(17));

    const auto l = GeneratorSequence::list(1, {1, 2, 3});
    CHECK(l.max_order() == 1);
    CHECK_THROWS_AS(l.alpha(4), InvalidInput);
    CHECK_THROWS_AS(assemble_truncation<double>(l, 2), InvalidInput);
}

TEST_CASE("generator validation names the field") {
    auto message = [](const char* text) {
        try {
            GeneratorSequence::from_json(nlohmann::json::parse(text));
        } catch (const InvalidInput& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"alphas":{"kind":"constant","value":1}})").rfind("p:", 0) == 0);
    CHECK(message(R"({"p":1,"alphas":{"kind":"list","values":[1,-2]}})").find("alpha_2") != std::string::npos);
    CHECK(message(R"({"p":1,"alphas":{"kind":"spiral"}})").rfind("alphas.kind", 0) == 0);
    CHECK(message(R"({"p":0,"alphas":{"kind":"constant","value":1}})").rfind("p:", 0) == 0);
}

TEST_CASE("assembled truncation equals the dense factor product") {
    for (int p = 1; p <= 4; ++p)
        for (int N : {0, 1, 3, 8}) {
            const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 100 + p * 10 + N);
            const auto T = assemble_truncation<double>(g, N).dense();
            const auto ref = oracle::truncation(g, N);
            for (int i = 0; i <= N; ++i)
                for (int j = 0; j <= N; ++j) CHECK(T[i][j] == doctest::Approx(ref(i, j)).epsilon(1e-14));
        }
}

TEST_CASE("two by two closed form") {
    const auto g = GeneratorSequence::constant(1, 1.0);
    const auto T = assemble_truncation<double>(g, 1).dense();
    CHECK(T[0][0] == 1);
    CHECK(T[0][1] == 1);
    CHECK(T[1][0] == 1);
    CHECK(T[1][1] == 2);
}

TEST_CASE("entry agrees with the assembled band") {
    const auto g = GeneratorSequence::uniform(3, 0.5, 2.0, 5);
    const auto T = assemble_truncation<double>(g, 12);
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) CHECK(entry(g, i, j) == T(i, j));
}

TEST_CASE("darboux transforms are the cyclic dense products") {
    for (int p = 2; p <= 3; ++p) {
        const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 40 + p);
        const int N = 7;
        for (int k = 1; k <= p; ++k) {
            const auto D = darboux<double>(g, N, k).dense();
            const auto ref = oracle::cyclic(g, N, k);
            for (int i = 0; i <= N; ++i)
                for (int j = 0; j <= N; ++j) CHECK(D[i][j] == doctest::Approx(ref(i, j)).epsilon(1e-13));
        }
        CHECK_THROWS_AS(darboux<double>(g, N, 0), InvalidInput);
    }
}

TEST_CASE("subdiagonal product and sign") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 3);
    const auto T = assemble_truncation<double>(g, 10);
    double h = 1;
    for (int i = 0; i < 4; ++i) h *= T(i + 2, i);
    CHECK(subdiagonal_product(T, 4) == doctest::Approx(h));
    CHECK(signed_subdiagonal_product(T, 3) == doctest::Approx(-subdiagonal_product(T, 3)));
    CHECK(signed_subdiagonal_product(T, 4) == doctest::Approx(subdiagonal_product(T, 4)));
}

TEST_CASE("leading and trailing blocks") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 8);
    const auto T = assemble_truncation<double>(g, 9);
    const auto L = T.leading(4);
    const auto Tr = T.trailing(3);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j) CHECK(L(i, j) == T(i, j));
    for (int i = 0; i <= 6; ++i)
        for (int j = 0; j <= 6; ++j) CHECK(Tr(i, j) == T(i + 3, j + 3));
}

TEST_CASE("pbf truncations are totally nonnegative and oscillatory") {
    for (int p = 1; p <= 3; ++p) {
        const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 60 + p);
        const auto M = assemble_truncation<double>(g, 5).dense();
        CHECK(totally_nonnegative(M));
        const auto rep = oscillatory_check(M);
        CHECK(rep.verdict == Verdict::True);
        CHECK(rep.exhaustive);
    }
}

TEST_CASE("oscillatory check rejects a negative minor") {
    Matrix<double> M = {{1, 2, 0}, {2, 1, 1}, {0, 1, 1}};  // 2x2 minor 1 - 4 < 0
    CHECK_FALSE(totally_nonnegative(M));
    CHECK(oscillatory_check(M).verdict == Verdict::False);
    Matrix<double> diag = {{1, 0}, {0, 1}};  // TN but reducible
    CHECK(oscillatory_check(diag).verdict == Verdict::False);
}

TEST_CASE("large sizes are indeterminate without provenance") {
    const auto g = GeneratorSequence::uniform(1, 0.5, 2.0, 1);
    const auto M = assemble_truncation<double>(g, 20).dense();
    CHECK(oscillatory_check(M).verdict == Verdict::Indeterminate);
    CHECK(oscillatory_check(M, 7, true).verdict == Verdict::True);
}

TEST_CASE("initial condition matrices") {
    const auto g = GeneratorSequence::uniform(3, 0.5, 2.0, 21);
    const Matrix<double> C = {{1, 0.3, 0.2}, {0, 1, 0.5}, {0, 0, 1}};
    const auto ic = initial_conditions<double>(g, C);
    // nu^{-T} = scriptL C is upper unitriangular; nu is lower unitriangular
    for (int i = 0; i < 3; ++i) {
        CHECK(ic.nu_inv_t[i][i] == doctest::Approx(1));
        CHECK(ic.nu[i][i] == doctest::Approx(1));
        for (int j = 0; j < i; ++j) {
            CHECK(ic.nu_inv_t[i][j] == 0);
            CHECK(ic.nu[j][i] == 0);
        }
    }
    // nu^T nu^{-T} = I
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += ic.nu[k][i] * ic.nu_inv_t[k][j];
            CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
        }
    for (int a = 0; a < 3; ++a) CHECK(ic.nu_inv_top_row[a] == doctest::Approx(ic.nu_inv_t[0][a]));
}

TEST_CASE("C validation") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 2);
    CHECK_THROWS_AS(initial_conditions<double>(g, Matrix<double>{{1, -0.5}, {0, 1}}), InvalidInput);
    CHECK_THROWS_AS(initial_conditions<double>(g, Matrix<double>{{1, 0}, {0.2, 1}}), InvalidInput);
    CHECK_THROWS_AS(initial_conditions<double>(g, Matrix<double>{{2, 0}, {0, 1}}), InvalidInput);
    CHECK_THROWS_AS(initial_conditions<double>(g, Matrix<double>{{1}}), InvalidInput);
    CHECK_NOTHROW(initial_conditions<double>(g, Matrix<double>{{1, -0.5}, {0, 1}}, true));
}

TEST_CASE("precision names") {
    CHECK(parse_precision("double") == Precision::Double);
    CHECK(parse_precision("extended") == Precision::Extended);
    CHECK_THROWS_AS(parse_precision("quad"), InvalidInput);
    CHECK(precision_name(Precision::Extended) == "extended");
}

}  // TEST_SUITE

TEST_SUITE("kernels") {

namespace {

std::uint64_t bits(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

}  // namespace

TEST_CASE("scalar and avx2 band products agree bit for bit") {
    if (!kernels::avx2_available()) {
        MESSAGE("AVX2 not available; equivalence not exercised");
        return;
    }
    for (int p = 1; p <= 5; ++p)
        for (int N : {0, 1, 2, 5, 17, 64}) {
            const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 300 + p * 7 + N);
            const auto T = assemble_truncation<double>(g, N);
            std::vector<double> x(N + 1), y1(N + 1), y2(N + 1);
            for (int i = 0; i <= N; ++i) x[i] = std::sin(1.0 + i) * 3;
            kernels::scalar::band_matvec(T, x.data(), y1.data());
            kernels::avx2::band_matvec(T, x.data(), y2.data());
            for (int i = 0; i <= N; ++i) CHECK(bits(y1[i]) == bits(y2[i]));
            kernels::scalar::band_vecmat(T, x.data(), y1.data());
            kernels::avx2::band_vecmat(T, x.data(), y2.data());
            for (int i = 0; i <= N; ++i) CHECK(bits(y1[i]) == bits(y2[i]));
        }
}

TEST_CASE("scalar and avx2 recurrence batches agree bit for bit") {
    if (!kernels::avx2_available()) return;
    for (int p = 1; p <= 4; ++p) {
        const auto g = GeneratorSequence::uniform(p, 0.5, 2.0, 900 + p);
        const int N = 60;
        const auto T = assemble_truncation<double>(g, N);
        for (std::size_t count : {1u, 3u, 4u, 7u, 33u}) {
            std::vector<double> xs(count), v1(count), d1(count), v2(count), d2(count);
            std::vector<int> c1(count), c2(count);
            for (std::size_t i = 0; i < count; ++i) xs[i] = 0.01 + 9.0 * static_cast<double>(i) / count;
            for (int n : {0, 5, N}) {
                kernels::scalar::eval_last(T, n, xs.data(), count, v1.data(), d1.data(), c1.data());
                kernels::avx2::eval_last(T, n, xs.data(), count, v2.data(), d2.data(), c2.data());
                for (std::size_t i = 0; i < count; ++i) {
                    CHECK(bits(v1[i]) == bits(v2[i]));
                    CHECK(bits(d1[i]) == bits(d2[i]));
                    CHECK(c1[i] == c2[i]);
                }
            }
        }
    }
}

TEST_CASE("dispatch matches the reference templates") {
    const auto g = GeneratorSequence::uniform(3, 0.5, 2.0, 4);
    const auto T = assemble_truncation<double>(g, 30);
    std::vector<double> x(31, 1.0), y1(31), y2(31);
    band_matvec_ref(T, x.data(), y1.data());
    kernels::band_matvec(T, x.data(), y2.data());
    for (int i = 0; i <= 30; ++i) CHECK(bits(y1[i]) == bits(y2[i]));
    double xs[2] = {0.5, 3.0}, v[2], d[2];
    int c[2];
    kernels::eval_last(T, 30, xs, 2, v, d, c);
    for (int i = 0; i < 2; ++i) {
        double rv, rd;
        int rc;
        kernels::eval_last_ref(T, 30, xs[i], rv, rd, rc);
        CHECK(bits(rv) == bits(v[i]));
        CHECK(bits(rd) == bits(d[i]));
        CHECK(rc == c[i]);
    }
}

TEST_CASE("forced isa") {
    kernels::force(kernels::Isa::Scalar);
    CHECK(kernels::active() == kernels::Isa::Scalar);
    if (kernels::avx2_available()) {
        kernels::force(kernels::Isa::Avx2);
        CHECK(kernels::active() == kernels::Isa::Avx2);
    }
}

TEST_CASE("extended band product matches double within rounding") {
    const auto g = GeneratorSequence::uniform(2, 0.5, 2.0, 77);
    const auto Td = assemble_truncation<double>(g, 20);
    const auto Te = assemble_truncation<extended>(g, 20);
    std::vector<double> x(21), yd(21);
    std::vector<extended> xe(21), ye(21);
    for (int i = 0; i <= 20; ++i) xe[i] = x[i] = 1.0 / (1 + i);
    kernels::matvec(Td, x.data(), yd.data());
    kernels::matvec(Te, xe.data(), ye.data());
    for (int i = 0; i <= 20; ++i) CHECK(yd[i] == doctest::Approx(to_double(ye[i])).epsilon(1e-14));
}

}  // TEST_SUITE
