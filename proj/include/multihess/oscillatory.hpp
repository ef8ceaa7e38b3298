#pragma once

#include "multihess/banded.hpp"

#include <string>

namespace multihess {

enum class Verdict { True, False, Indeterminate };

std::string verdict_name(Verdict v);

struct OscillatoryReport {
    Verdict verdict = Verdict::Indeterminate;
    bool exhaustive = false;       // full minor scan was run
    long minors_checked = 0;
    double most_negative_minor = 0;  // most negative scaled minor seen (0 if none)
    std::string reason;
};

// Gantmacher-Krein: TN + nonsingular + positive first sub/superdiagonals.
// Sizes above exhaustive_limit are certified only through PBF provenance.
OscillatoryReport oscillatory_check(const Matrix<double>& M, int exhaustive_limit = 7, bool pbf_provenance = false);

// Brute-force: every minor >= -tol * (Hadamard-type scale of that minor).
bool totally_nonnegative(const Matrix<double>& M, double tol = 1e-12, long* checked = nullptr,
                         double* most_negative = nullptr);

}  // namespace multihess
