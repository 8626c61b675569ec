#pragma once

#include <functional>
#include <variant>

#include "ssst/spacetime.hpp"

namespace ssst {

struct ParamSchema {
    std::string name;
    double def = 0.0;
    double min = -std::numeric_limits<double>::infinity();
    double max = std::numeric_limits<double>::infinity();
    bool integral = false;
};

using CatalogObject = std::variant<Spacetime, ChartManifold>;

// Built-in parameterized example spaces with known ground truth. The notes
// map carries machine-readable expected values at the default parameters;
// the test suite asserts them.
struct CatalogEntry {
    std::string name;
    std::string kind;     // "static", "grw" or "chart"
    std::string summary;  // one line for `catalog list`
    std::vector<ParamSchema> params;
    std::map<std::string, double> notes;
    std::function<CatalogObject(const ParamMap&)> build;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_entry(const std::string& name);

// Constructs and validates the entry with defaults overridden by `overrides`.
CatalogObject catalog_get(const std::string& name, const ParamMap& overrides = {});

// Same, but requires a space-time entry.
Spacetime catalog_spacetime(const std::string& name, const ParamMap& overrides = {});

}  // namespace ssst
