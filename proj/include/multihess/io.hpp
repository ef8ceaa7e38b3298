#pragma once

#include "multihess/banded.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace multihess {

// Deterministic JSON text: insertion order kept, every float printed with %.17g.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

std::string format_double(double v);

// "i,j,value" rows of the nonzero entries, or the full grid without a header.
template <class R> void write_matrix_csv(std::ostream& os, const Matrix<R>& M, bool sparse = true);

// Line and column (1-based) of a byte offset in text.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset);

}  // namespace multihess
