#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nctorus/abelian_group.hpp"
#include "nctorus/finite_fm.hpp"
#include "nctorus/lattice.hpp"

namespace nctorus {

enum class Grid { small, full };

struct VerifyOptions {
    std::uint64_t seed = 7;
    Grid grid = Grid::small;
    // replaces the random cocycles of the twisted-equivariant suite
    std::optional<GroupCochain> phi;
};

struct PropertyResult {
    std::string name;
    bool ok = true;
    std::size_t cases = 0;
    double max_deviation = 0.0;
    std::string witness; // first counterexample, empty when ok
    nlohmann::json notes; // null unless the property has extra figures to report
};

struct SuiteReport {
    std::string scope;
    std::vector<PropertyResult> properties;
    bool ok() const;
};

// "cocycle", "qweyl", "laurent-star", "lattice", "twisted-equivariant", "finite-fm"
const std::vector<std::string>& verify_scopes();

// Throws std::invalid_argument for an unknown scope.
SuiteReport run_suite(const std::string& scope, const VerifyOptions& options);
// Suites run concurrently; the reports come back in the order of `scopes`.
std::vector<SuiteReport> run_suites(const std::vector<std::string>& scopes, const VerifyOptions& options);

// The finite-fm checks on a single model. `points`, when given, also runs the
// product-on-points comparison on its dual pair.
SuiteReport fm_demo(const TorusModel& model, const DualPairData* points, std::uint64_t seed, int pairs = 20);

nlohmann::json to_json(const PropertyResult& p);
nlohmann::json to_json(const SuiteReport& r);

} // namespace nctorus
