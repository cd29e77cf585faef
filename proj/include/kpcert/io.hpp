#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kpcert/certify.hpp"
#include "kpcert/errors.hpp"
#include "kpcert/generate.hpp"
#include "kpcert/instance.hpp"
#include "kpcert/picard.hpp"

namespace kpcert::io {

using Json = nlohmann::ordered_json;

/// A structurally malformed instance document; `where` is a JSON pointer.
class FormatError : public StructuralError {
public:
    FormatError(const std::string& where, const std::string& what)
        : StructuralError(where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// The instance document as written, before any validator has run:
///   {"points": [str], "dist": [[num]], "anchor": int, "map": [int],
///    "partition": [[int]], "pata": {...}, "grid": {"points": int} | {"values": [num]}}
/// Only "points" and "dist" are required. Indices are 0-based.
struct InstanceFile {
    std::vector<std::string> points;
    DistanceMatrix dist;
    std::optional<std::size_t> anchor;
    std::optional<std::vector<PointIndex>> map;
    std::optional<std::vector<std::vector<PointIndex>>> partition;
    std::optional<PataParams> pata;
    std::optional<EpsilonGrid> grid;
};

/// Shape and type checks only. Throws FormatError (or ParameterError for
/// out-of-range pata/grid values).
InstanceFile parse_instance_file(const Json& doc);

/// Validates the metric and every index. Throws MetricError or
/// StructuralError; a missing "map" is a StructuralError. The inclusions
/// T(A_i) in A_{i+1} are left to validate_cyclic and the certifiers.
Instance build_instance(const InstanceFile& file, std::optional<double> metric_tolerance = {});

Json to_json(const Instance& instance);
Json to_json(const PataParams& params);
Json to_json(const EpsilonGrid& grid);
Json to_json(const ValidationReport& report);
Json to_json(const CyclicValidation& validation);
Json to_json(const Certificate& certificate);
Json to_json(const PicardTrace& trace);
Json to_json(const TraceDiagnostics& diagnostics);
Json to_json(const FixedPointReport& report);
Json to_json(const GenConfig& cfg);
Json to_json(const Classification& classification);
Json to_json(const ClassCounts& counts);

PataParams pata_from_json(const Json& j, const std::string& where = "/pata");
EpsilonGrid grid_from_json(const Json& j, const std::string& where = "/grid");
/// Keys mirror GenConfig; absent keys keep their defaults.
GenConfig gen_config_from_json(const Json& j);

/// Two-space indented with a trailing newline.
std::string dump(const Json& j);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace kpcert::io
