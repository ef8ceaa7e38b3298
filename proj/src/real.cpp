#include "multihess/real.hpp"

#include "multihess/errors.hpp"

namespace multihess {

Precision parse_precision(const std::string& s) {
    if (s == "double") return Precision::Double;
    if (s == "extended") return Precision::Extended;
    throw InvalidInput("precision: expected \"double\" or \"extended\", got \"" + s + "\"");
}

std::string precision_name(Precision p) { return p == Precision::Double ? "double" : "extended"; }

}  // namespace multihess
