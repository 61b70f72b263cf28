#pragma once

#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "dcx/chain.hpp"
#include "dcx/d0.hpp"
#include "dcx/diagram.hpp"
#include "dcx/homology.hpp"
#include "dcx/nil.hpp"

namespace dcx {

using Json = nlohmann::ordered_json;

/// Matrix entries are strings ("3", "-1/2"); numbers are accepted on input.
/// Parse failures throw ParseError naming the JSON path.
Json scalar_to_json(const Scalar& x);
Scalar scalar_from_json(const Json& j, const std::string& where);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const Ring& ring, std::size_t rows, std::size_t cols, const std::string& where);

/// {"ring": "Z", "ranks": {"0": 1}, "differentials": {"1": [["2"]]}}; key n holds d_n: C_n → C_{n−1}.
/// A ring override replaces the ring named in the file.
Json complex_to_json(const ChainComplex& c);
ChainComplex complex_from_json(const Json& j, std::optional<Ring> ring = std::nullopt, const std::string& where = "$");

/// {"degree": d, "blocks": {"n": matrix}}; missing blocks are zero.
Json graded_map_to_json(const GradedMap& f);
GradedMap graded_map_from_json(const Json& j, const ComplexPtr& source, const ComplexPtr& target,
                               const std::string& where, std::optional<int> degree = std::nullopt);

/// {"rank": r, "twist": ["1", "3"]} (twist optional).
Json bimodule_to_json(const Bimodule& s);
Bimodule bimodule_from_json(const Json& j, const Ring& ring, const std::string& where);

/// {"kind": "dcomplex", "ring", "diagram": {"preset", "levels", "bimodules"},
///  "vertices": [complex], "edges": {name: {"n": matrix}}}.
Json dcomplex_to_json(const DComplex& x);
DComplex dcomplex_from_json(const Json& j, std::optional<Ring> ring = std::nullopt, const std::string& where = "$");

/// {"kind": "d0", "ring", "bimodule", "stabilization", "levels": [B_1 … B_N],
///  "lambda": {"i": blocks}, "alpha": {"i": blocks}}; level 0 is implicit.
Json d0_to_json(const D0Complex& x);
D0Complex d0_from_json(const Json& j, std::optional<Ring> ring = std::nullopt, const std::string& where = "$");

/// {"degree": p, "levels": {"i": blocks}}.
Json d0_morphism_to_json(const D0Morphism& f);
D0Morphism d0_morphism_from_json(const Json& j, const D0Complex& x, const D0Complex& y, const std::string& where);

Json homology_to_json(const std::map<int, HomologyGroup>& h, const Ring& ring);
Json splitting_to_json(const SplittingData& s);

/// Reads and parses a UTF-8 JSON file; throws ParseError with the file name.
Json read_json_file(const std::string& path);

}  // namespace dcx
