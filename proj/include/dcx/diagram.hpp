#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcx/chain.hpp"

namespace dcx {

struct Edge {
  std::string name;
  std::size_t from = 0;
  std::size_t to = 0;
  Bimodule bimodule;
};

/// Two composable edge sequences (first element applied first) that must
/// give equal composites.
struct Relation {
  std::vector<std::size_t> lhs;
  std::vector<std::size_t> rhs;
};

struct DiagramOfBimodules {
  std::string name;
  std::vector<Ring> vertices;
  std::vector<Edge> edges;
  std::vector<Relation> relations;

  /// Throws PreconditionError on dangling edges or ill-formed relations.
  void validate() const;
  /// Source and target vertex of a composable path; throws otherwise.
  std::pair<std::size_t, std::size_t> endpoints(const std::vector<std::size_t>& path, std::size_t start) const;
  std::optional<std::size_t> edge_index(const std::string& name) const;
};

enum class PresetKind { D1, D2, D3, D0Truncated };

/// D1: one vertex with a loop S. D2: edges S: 0→1, T: 1→0. D3: adds loops
/// S on 0 and T on 1, with U: 0→1 and V: 1→0. D0Truncated(N): vertices 0..N,
/// edges lambda_i: i→i+1 (bimodule R) and alpha_i: i→i−1 (bimodule S), with
/// alpha_{i+1}∘lambda_i = lambda_{i−1}∘alpha_i.
DiagramOfBimodules preset_diagram(PresetKind kind, Ring ring, const std::vector<Bimodule>& bimodules,
                                  std::size_t levels = 0);
std::optional<PresetKind> parse_preset(const std::string& name);

/// A chain complex on every vertex and a chain map C_a → C_b ⊗ S_f on every edge.
struct DComplex {
  DiagramOfBimodules diagram;
  std::vector<ComplexPtr> vertex;
  std::vector<GradedMap> edge_map;

  /// Edge maps with zero blocks, ready to be filled.
  static DComplex zero(DiagramOfBimodules diagram, std::vector<ComplexPtr> vertex);
  /// Codomain C_b ⊗ S_f of an edge.
  ComplexPtr edge_target(std::size_t e) const;

  /// Problems found: invalid complexes, non-chain edge maps, broken relations.
  std::vector<std::string> problems() const;
  bool valid() const { return problems().empty(); }
};

/// C_a ⊗ S for a shared complex; returns c itself for a rank-1 untwisted S.
ComplexPtr tensored(const ComplexPtr& c, const Bimodule& s);

/// Composite along a path (first edge applied first). The result maps
/// C_start → C_end ⊗ B where B = tensor_bimodules(earlier factors, later factors).
struct PathComposite {
  GradedMap map;
  Bimodule bimodule;
  std::size_t start = 0;
  std::size_t end = 0;
};
PathComposite path_composite(const DComplex& x, const std::vector<std::size_t>& path, std::size_t start);

/// Every composable edge sequence of the given length.
std::vector<std::vector<std::size_t>> paths_of_length(const DiagramOfBimodules& d, std::size_t length);

struct NilpotencyReport {
  std::optional<std::size_t> degree;
  /// A composite that is not null-homotopic at the largest length tried.
  std::vector<std::size_t> witness_path;
  std::size_t paths_checked = 0;
};
/// Smallest n ≤ max_n such that every composite of length n+1 is null-homotopic.
NilpotencyReport nilpotency_degree(const DComplex& x, std::size_t max_n);

/// The D1-complex on vertex `at` whose loop is the round trip through the
/// other vertex, over the composite bimodule.
DComplex collapse_d2_to_d1(const DComplex& x, std::size_t at = 0);

/// Vertexwise direct sum over a common diagram.
DComplex direct_sum(const DComplex& x, const DComplex& y);

}  // namespace dcx
