#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV encodings of solver and verifier records.
 *
 * Every record is first flattened into an ordered list of named fields; the
 * JSON object and the CSV row are both produced from that list, so the two
 * formats always carry the same fields in the same order. Reals are rounded
 * to 12 significant digits before encoding.
 */

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

#include "robinbd/bd_verifier.hpp"
#include "robinbd/errors.hpp"
#include "robinbd/levelsets_h.hpp"
#include "robinbd/model_spaces.hpp"
#include "robinbd/radial_solver.hpp"

namespace robinbd::io {

using Json = nlohmann::ordered_json;

/// A field value; monostate encodes a missing value (JSON null, empty CSV cell).
using Value = std::variant<std::monostate, double, std::int64_t, bool, std::string>;
using Field = std::pair<std::string, Value>;
using Row = std::vector<Field>;

/// x rounded to 12 significant digits.
[[nodiscard]] inline double round12(double x)
{
    if (!std::isfinite(x) || x == 0.0) {
        return x;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

[[nodiscard]] inline std::string format12(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

[[nodiscard]] inline Value optional_value(const std::optional<double>& x)
{
    return x ? Value{*x} : Value{};
}

// ---------------------------------------------------------------------------
// Encoders
// ---------------------------------------------------------------------------

[[nodiscard]] inline Json to_json(const Value& v)
{
    return std::visit(
        [](const auto& x) -> Json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(x)) {
                    return nullptr;
                }
                return round12(x);
            } else {
                return x;
            }
        },
        v);
}

[[nodiscard]] inline Json to_json(const Row& row)
{
    Json obj = Json::object();
    for (const auto& [key, value] : row) {
        obj[key] = to_json(value);
    }
    return obj;
}

[[nodiscard]] inline Json to_json(const std::vector<Row>& rows)
{
    Json arr = Json::array();
    for (const Row& r : rows) {
        arr.push_back(to_json(r));
    }
    return arr;
}

[[nodiscard]] inline std::string csv_cell(const Value& v)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, double>) {
                return std::isfinite(x) ? format12(x) : "";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else {
                if (x.find_first_of(",\"\n") == std::string::npos) {
                    return x;
                }
                std::string quoted = "\"";
                for (const char c : x) {
                    quoted += c;
                    if (c == '"') {
                        quoted += '"';
                    }
                }
                return quoted + "\"";
            }
        },
        v);
}

/// Header line from the first row's keys, then one line per row.
[[nodiscard]] inline std::string to_csv(const std::vector<Row>& rows)
{
    std::ostringstream out;
    if (rows.empty()) {
        return "";
    }
    for (std::size_t i = 0; i < rows.front().size(); ++i) {
        out << (i ? "," : "") << rows.front()[i].first;
    }
    out << '\n';
    for (const Row& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_cell(row[i].second);
        }
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

inline void append_space(Row& row, const SpaceForm& sf)
{
    row.emplace_back("space", sf.label());
    row.emplace_back("kappa", static_cast<std::int64_t>(sf.curvature_sign));
    row.emplace_back("n", static_cast<std::int64_t>(sf.dimension));
    row.emplace_back("sphere_radius", optional_value(sf.sphere_radius));
}

/// First-eigenvalue result with the options it was computed under.
struct EigenRecord {
    SpaceForm space;
    RobinParams params;
    std::string domain;
    double lambda = 0.0;
    double residual = 0.0;
    double bracket_width = 0.0;
    double tol = 0.0;
    int grid = 0;
    std::optional<double> oracle_lambda;
};

[[nodiscard]] inline EigenRecord make_eigen_record(const RadialEigenSolution& sol,
                                                   const SolverOptions& opts)
{
    return {sol.space(), sol.params(), sol.domain().label(), sol.lambda, sol.residual,
            sol.bracket_width, opts.tol, opts.grid, std::nullopt};
}

[[nodiscard]] inline Row to_row(const EigenRecord& rec)
{
    Row row;
    append_space(row, rec.space);
    row.emplace_back("p", rec.params.p);
    row.emplace_back("beta", rec.params.beta);
    row.emplace_back("domain", rec.domain);
    row.emplace_back("lambda", rec.lambda);
    row.emplace_back("residual", rec.residual);
    row.emplace_back("bracket_width", rec.bracket_width);
    row.emplace_back("tol", rec.tol);
    row.emplace_back("grid", static_cast<std::int64_t>(rec.grid));
    row.emplace_back("oracle_lambda", optional_value(rec.oracle_lambda));
    return row;
}

[[nodiscard]] inline Row to_row(const ComparisonRecord& rec)
{
    Row row;
    append_space(row, rec.space);
    row.emplace_back("p", rec.params.p);
    row.emplace_back("beta", rec.params.beta);
    row.emplace_back("domain", rec.domain);
    row.emplace_back("alpha", rec.alpha);
    row.emplace_back("lambda_domain", rec.lambda_domain);
    row.emplace_back("sharp_radius", rec.sharp_radius);
    row.emplace_back("lambda_ball", rec.lambda_ball);
    row.emplace_back("gap", rec.gap);
    row.emplace_back("perimeter", rec.perimeter);
    row.emplace_back("sharp_perimeter", rec.sharp_perimeter);
    row.emplace_back("isoperimetric_gap", rec.isoperimetric_gap);
    row.emplace_back("flagged", rec.flagged);
    row.emplace_back("passed", rec.passed);
    row.emplace_back("error", rec.error.empty() ? Value{} : Value{rec.error});
    return row;
}

[[nodiscard]] inline Row to_row(const HScanRow& r)
{
    return {{"t", r.t},
            {"volume", r.volume},
            {"interior_area", r.interior_area},
            {"exterior_area", r.exterior_area},
            {"H", r.h}};
}

[[nodiscard]] inline std::vector<Row> profile_rows(const RadialEigenSolution& sol)
{
    std::vector<Row> rows;
    rows.reserve(sol.grid.size());
    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
        rows.push_back({{"r", sol.grid[k]}, {"v", sol.v[k]}, {"w", sol.w[k]}, {"f", sol.f[k]}});
    }
    return rows;
}

template <class Record>
[[nodiscard]] std::vector<Row> to_rows(const std::vector<Record>& records)
{
    std::vector<Row> rows;
    rows.reserve(records.size());
    for (const Record& r : records) {
        rows.push_back(to_row(r));
    }
    return rows;
}

[[nodiscard]] inline Json to_json(const SweepSummary& s)
{
    Json obj = Json::object();
    obj["cells"] = s.cells;
    obj["failures"] = s.failures;
    obj["min_gap"] = to_json(Value{s.min_gap});
    return obj;
}

[[nodiscard]] inline Json to_json(const SweepReport& report)
{
    Json obj = Json::object();
    obj["records"] = to_json(to_rows(report.records));
    obj["summary"] = to_json(report.summary);
    return obj;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

/// Write `content` to a sibling temporary file, then rename it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

[[nodiscard]] inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace robinbd::io
