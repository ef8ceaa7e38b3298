#include "multihess/oscillatory.hpp"

#include "multihess/errors.hpp"
#include "multihess/linalg.hpp"

#include <cmath>
#include <vector>

namespace multihess {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

// next k-subset of {0..n-1} in lexicographic order
bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    return true;
}

}  // namespace

bool totally_nonnegative(const Matrix<double>& M, double tol, long* checked, double* most_negative) {
    const int n = static_cast<int>(M.size());
    long count = 0;
    double worst = 0;
    bool ok = true;
    for (int k = 1; k <= n; ++k) {
        std::vector<int> rows(k);
        for (int i = 0; i < k; ++i) rows[i] = i;
        do {
            std::vector<int> cols(k);
            for (int i = 0; i < k; ++i) cols[i] = i;
            do {
                Matrix<double> sub(k, std::vector<double>(k));
                for (int a = 0; a < k; ++a)
                    for (int b = 0; b < k; ++b) sub[a][b] = M[rows[a]][cols[b]];
                const double det = linalg::determinant(sub);
                const double scale = linalg::permanent_abs(sub);
                ++count;
                if (scale > 0) {
                    const double rel = det / scale;
                    if (rel < worst) worst = rel;
                    if (rel < -tol) ok = false;
                }
            } while (next_combination(cols, n));
        } while (next_combination(rows, n));
    }
    if (checked) *checked = count;
    if (most_negative) *most_negative = worst;
    return ok;
}

OscillatoryReport oscillatory_check(const Matrix<double>& M, int exhaustive_limit, bool pbf_provenance) {
    const int n = static_cast<int>(M.size());
    for (const auto& row : M)
        if (static_cast<int>(row.size()) != n) throw InvalidInput("oscillatory_check: matrix is not square");
    OscillatoryReport rep;
    if (n == 0) {
        rep.verdict = Verdict::False;
        rep.reason = "empty matrix";
        return rep;
    }
    // cheap parts of the criterion
    for (int i = 0; i + 1 < n; ++i) {
        if (!(M[i][i + 1] > 0) || !(M[i + 1][i] > 0)) {
            rep.verdict = Verdict::False;
            rep.reason = "first sub/superdiagonal entry at " + std::to_string(i) + " is not positive";
            return rep;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (M[i][j] < 0) {
                rep.verdict = Verdict::False;
                rep.reason = "negative entry";
                return rep;
            }
    if (n <= exhaustive_limit) {
        rep.exhaustive = true;
        const bool tn = totally_nonnegative(M, 1e-12, &rep.minors_checked, &rep.most_negative_minor);
        if (!tn) {
            rep.verdict = Verdict::False;
            rep.reason = "negative minor";
            return rep;
        }
        const double det = linalg::determinant(M);
        if (!(std::abs(det) > 1e-13 * linalg::permanent_abs(M))) {
            rep.verdict = Verdict::False;
            rep.reason = "singular";
            return rep;
        }
        rep.verdict = Verdict::True;
        rep.reason = "totally nonnegative, nonsingular, positive first sub/superdiagonals";
        return rep;
    }
    if (pbf_provenance) {
        rep.verdict = Verdict::True;
        rep.reason = "certified by positive bidiagonal factorization";
        return rep;
    }
    rep.verdict = Verdict::Indeterminate;
    rep.reason = "size above exhaustive limit and no factorization provenance";
    return rep;
}

}  // namespace multihess
