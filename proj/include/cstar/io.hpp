#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cstar/dpoly.hpp"
#include "cstar/graph.hpp"
#include "cstar/star.hpp"
#include "cstar/tpoly.hpp"
#include "cstar/weight.hpp"

namespace cstar {

/// Insertion-ordered JSON so emitted documents have a stable field order.
using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `{"dim": d, "degree": k, "components": {"1,2": "<poly>", ...}}`, one-based axes.
Json to_json(const PolyVector& v);
PolyVector polyvector_from_json(const Json& j);

/// `{"dim": d, "log_density": "<poly>"}`.
Json to_json(const VolumeForm& vol);
VolumeForm volume_from_json(const Json& j);

/// `{"dim": d, "arity": k, "terms": [{"coeff": "<poly>", "indices": [[...], ...]}]}`.
Json to_json(const PolyDiffOperator& psi);
PolyDiffOperator operator_from_json(const Json& j);

/// `[{"n": .., "m": .., "stars": [["b1", "2"], ...]}, ...]`.
Json to_json(const std::vector<AdmissibleGraph>& graphs);
std::vector<AdmissibleGraph> graphs_from_json(const Json& j);

/// `{"entries": [{"graph", "alphas", "value", "std_error", "samples", "seed",
/// "rejected", "exact"}]}` with `exact` a "p/q" string or null.
Json to_json(const WeightTable& table);
WeightTable table_from_json(const Json& j);

/// Levels as operator JSON plus π, order and weight provenance.
Json to_json(const StarProduct& s);

Json to_json(const CheckReport& report);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json parse_json(const std::string& text, const std::string& origin);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

} // namespace cstar
