#include "multihess/io.hpp"

#include "multihess/real.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace multihess {

std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(std::ostringstream& os, const nlohmann::ordered_json& j, int indent, int depth) {
    const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) { os << "{}"; return; }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ',';
            first = false;
            os << pad << nlohmann::ordered_json(it.key()).dump() << sep;
            emit(os, it.value(), indent, depth + 1);
        }
        os << close << '}';
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) { os << "[]"; return; }
        // short scalar arrays stay on one line
        const bool flat = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
        os << '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first) os << (flat && indent > 0 ? ", " : ",");
            first = false;
            if (!flat) os << pad;
            emit(os, e, indent, depth + 1);
        }
        os << (flat ? "" : close) << ']';
        return;
    }
    case nlohmann::json::value_t::number_float:
        os << format_double(j.get<double>());
        return;
    default:
        os << j.dump();
    }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
    std::ostringstream os;
    emit(os, j, indent, 0);
    return os.str();
}

template <class R> void write_matrix_csv(std::ostream& os, const Matrix<R>& M, bool sparse) {
    if (sparse) {
        os << "i,j,value\n";
        for (std::size_t i = 0; i < M.size(); ++i)
            for (std::size_t j = 0; j < M[i].size(); ++j)
                if (M[i][j] != R(0)) os << i << ',' << j << ',' << format_double(to_double(M[i][j])) << '\n';
        return;
    }
    for (const auto& row : M) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_double(to_double(row[j]));
        os << '\n';
    }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; }
        else ++col;
    }
    return {line, col};
}

template void write_matrix_csv<double>(std::ostream&, const Matrix<double>&, bool);
template void write_matrix_csv<extended>(std::ostream&, const Matrix<extended>&, bool);

}  // namespace multihess
