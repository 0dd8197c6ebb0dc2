#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "harmlab/graph.hpp"

namespace harmlab {

/// Canonical normal form of a group element; the layout is group-specific
/// but equal elements always have equal encodings.
using GroupElement = std::vector<std::int64_t>;

struct Generator {
  std::string name;
  GroupElement element;
  int inverse = -1;  // index of the inverse generator
};

class Group {
 public:
  virtual ~Group() = default;

  virtual std::string name() const = 0;
  virtual GroupElement identity() const = 0;
  virtual GroupElement multiply(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inverse(const GroupElement& a) const = 0;
  virtual std::string format(const GroupElement& a) const;

  const std::vector<Generator>& generators() const noexcept { return generators_; }
  int generator_index(std::string_view name) const;
  // Word given as generator indices.
  GroupElement evaluate(std::span<const int> word) const;

 protected:
  // Adds missing inverses and links each generator to its inverse.
  void set_generators(std::vector<Generator> gens);

 private:
  std::vector<Generator> generators_;
};

enum class GroupKind { FreeAbelian, Free, Lamplighter, Heisenberg, BaumslagSolitar, DihedralInfinite };

struct GroupSpec {
  GroupKind kind = GroupKind::FreeAbelian;
  int rank = 1;    // d for Z^d and for the lamplighter base, k for free(k)
  int q = 2;       // lamp group order
  int n = 2;       // BS(1,n)
  // Optional custom generators (Z^d: integer vectors; free(k): words in
  // letters +-(i+1)). Inverses are added automatically.
  std::vector<std::vector<std::int64_t>> custom_generators;
};

// "zd:2", "free:2", "lamplighter:2,1", "heisenberg", "bs:1,2", "dinf".
GroupSpec parse_group_spec(std::string_view text);
std::string to_string(const GroupSpec& spec);
std::shared_ptr<const Group> build_group(const GroupSpec& spec);

inline constexpr std::size_t kDefaultBallCap = 2'000'000;

/// Ball of radius R around the identity in the Cayley graph. Vertex 0 is the
/// identity; vertices are numbered in BFS order over the generator list.
class CayleyBall {
 public:
  static CayleyBall build(std::shared_ptr<const Group> group, int radius,
                          std::size_t cap = kDefaultBallCap);

  const OrientedGraph& graph() const noexcept { return graph_; }
  const Group& group() const noexcept { return *group_; }
  std::shared_ptr<const Group> group_ptr() const noexcept { return group_; }
  int radius() const noexcept { return radius_; }
  VertexId identity_vertex() const noexcept { return 0; }
  VertexId size() const noexcept { return graph_.num_vertices(); }
  int generator_count() const noexcept { return generator_count_; }

  int word_length(VertexId v) const { return word_length_[static_cast<std::size_t>(v)]; }
  std::span<const int> word_lengths() const noexcept { return word_length_; }
  bool interior(VertexId v) const { return word_length(v) < radius_; }
  GroupElement element(VertexId v) const;
  std::optional<VertexId> find(const GroupElement& g) const;
  // Neighbour v*s for generator index s, if it lies in the ball.
  std::optional<VertexId> step(VertexId v, int generator) const;
  // Generator s with tail*s = head.
  int edge_label(EdgeId e) const { return edge_label_[static_cast<std::size_t>(e)]; }

  std::vector<VertexId> vertices_within(int r) const;
  nlohmann::json to_json() const;

 private:
  std::shared_ptr<const Group> group_;
  int radius_ = 0;
  int generator_count_ = 0;
  std::vector<std::int64_t> arena_;
  std::vector<std::size_t> arena_offset_;
  std::vector<int> word_length_;
  std::vector<VertexId> neighbor_;  // size() * generator_count
  std::vector<int> edge_label_;
  std::vector<std::uint32_t> slots_;
  OrientedGraph graph_;

  std::span<const std::int64_t> raw_element(VertexId v) const;
};

struct EdgeStep {
  EdgeId edge;
  int direction;  // +1 when traversed tail -> head
};

// Path from `base` following the generator word; raises PathExitsBall.
std::vector<EdgeStep> path_of_element(const CayleyBall& ball, std::span<const int> word, VertexId base);

// Parses "s1 s2^-1 ..." or "s1,s2^-1" style words (names from the group).
std::vector<int> parse_word(const Group& group, std::string_view text);
// Commutator word [x,y] = x y x^-1 y^-1 of two generators.
std::vector<int> commutator_word(const Group& group, int x, int y);

}  // namespace harmlab
