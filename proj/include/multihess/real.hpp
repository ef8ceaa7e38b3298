#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace multihess {

// 80 decimal digits, expression templates off so `auto` and generic code behave.
using extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>,
                                               boost::multiprecision::et_off>;

enum class Precision { Double, Extended };

Precision parse_precision(const std::string& s);
std::string precision_name(Precision p);

template <class R> struct real_traits;

template <> struct real_traits<double> {
    static constexpr Precision precision = Precision::Double;
    static double eps() { return std::numeric_limits<double>::epsilon(); }
    // root polish target, relative
    static double root_tol() { return 4e-16; }
};

template <> struct real_traits<extended> {
    static constexpr Precision precision = Precision::Extended;
    static extended eps() { return std::numeric_limits<extended>::epsilon(); }
    static extended root_tol() { return extended(1e-76); }
};

inline double to_double(double x) { return x; }
inline double to_double(const extended& x) { return x.convert_to<double>(); }

template <class R> R from_double(double x) { return R(x); }

}  // namespace multihess
