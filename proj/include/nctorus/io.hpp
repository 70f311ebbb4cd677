#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nctorus/abelian_group.hpp"
#include "nctorus/cocycle.hpp"
#include "nctorus/equivariant.hpp"
#include "nctorus/linalg.hpp"
#include "nctorus/qweyl.hpp"

namespace nctorus {

// A malformed or invalid input file; what() reads "origin:line:column: message".
class InputError : public std::runtime_error {
public:
    InputError(const std::string& origin, std::size_t line, std::size_t column, const std::string& msg);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

// JSON text plus the source position of every value, keyed by JSON pointer.
class LocatedJson {
public:
    LocatedJson(std::string_view text, std::string origin);
    const nlohmann::json& root() const noexcept { return root_; }
    // Throws InputError located at the value `pointer` (or the nearest enclosing one).
    [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const;

private:
    nlohmann::json root_;
    std::string origin_;
    std::map<std::string, std::pair<std::size_t, std::size_t>> where_;
};

struct ParamFile {
    BilinearCocycle lambda;
    std::optional<PeriodMatrix> q;
};

// { "g": int, "N": int, "M": [[int]], "Q": [[[re, im]]] (optional) }
ParamFile parse_param(std::string_view text, const std::string& origin = "<input>");
ParamFile load_param(const std::string& path);

// { "group": [d_1, ..., d_r], "phi": |G| x |G| table of "p/q" strings }
GroupCochain parse_phi(std::string_view text, const std::string& origin = "<input>");
GroupCochain load_phi(const std::string& path);

std::string read_file(const std::string& path);

nlohmann::json to_json(const Phase& p);
nlohmann::json to_json(Complex c);
nlohmann::json to_json(const CMatrix& m);
nlohmann::json to_json(const IntMatrix& m);
nlohmann::json to_json(const GroupCochain& phi);
nlohmann::json to_json(const EquivariantObject& obj);

Phase phase_from_json(const nlohmann::json& j);
Complex complex_from_json(const nlohmann::json& j);

} // namespace nctorus
