#pragma once

#include <string>

#include <json.hpp>

#include "ssst/spacetime.hpp"

namespace ssst {

using Json = nlohmann::ordered_json;

// Canonical JSON form of a space-time: kind, interval, coords, domain,
// upper-triangular metric expression strings, warping and bound parameters.
// Used both as the input file format and to fingerprint inputs.
Json canonical_spec_json(const Spacetime& st);

// FNV-1a 64-bit content hash, hex encoded.
std::string fnv1a64_hex(std::string_view bytes);

struct LoadedSpec {
    Spacetime spacetime;
    Json canonical;
    std::string digest;  // fnv1a64 of the canonical dump
    std::string source;  // "catalog:..." or the file path
};

// Builds a Spacetime from parsed spec JSON; validates shape and content.
Spacetime spacetime_from_json(const Json& j);

// Resolves "catalog:name" / "catalog:name?p=1,q=2" or a JSON file path.
LoadedSpec resolve_spec(const std::string& arg);

}  // namespace ssst
