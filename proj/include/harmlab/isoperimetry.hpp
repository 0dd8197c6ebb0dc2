#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "harmlab/cayley.hpp"
#include "harmlab/graph.hpp"

namespace harmlab {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

struct ProfileOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;  // connected sets visited
};

/// Minimal |dF|/|F| over connected sets of each size, with witnesses.
/// Index 0 is unused; entries run over sizes 1..max_size.
struct IsoProfile {
  int max_size = 0;
  std::vector<std::int64_t> min_boundary;
  std::vector<double> ratio;       // +inf where no set of that size was seen
  std::vector<double> envelope;    // running minimum of ratio
  std::vector<std::vector<VertexId>> witness;
  std::vector<char> exact;         // false once the budget ran out
  std::uint64_t sets_visited = 0;
  bool complete = true;
  bool truncated_ball = false;     // computed inside a finite ball of a group

  double at(int size) const { return ratio.at(static_cast<std::size_t>(size)); }
  double envelope_at(int size) const { return envelope.at(static_cast<std::size_t>(size)); }
  // Throws EnumerationBudgetExceeded when the profile is partial.
  const IsoProfile& require_complete() const;
};

// Every connected set with all vertices allowed is visited once, rooted at
// its smallest vertex id.
IsoProfile iso_profile(const OrientedGraph& g, int max_size, const ProfileOptions& opts = {});
// Vertex-transitive version: sets are rooted at the identity and kept at
// distance at least 2 from the sphere of the ball. For Z^d only translates
// whose lexicographically smallest element is the identity are visited.
IsoProfile iso_profile(const CayleyBall& ball, int max_size, const ProfileOptions& opts = {});

// Steps from x to leave F, minus one: 0 for vertices with an edge out of F.
// Vertices of deficient degree count as having a missing neighbour outside.
std::vector<int> depth_in_set(const OrientedGraph& g, const SubsetView& f);
int inradius(const OrientedGraph& g, const SubsetView& f);
int diameter(const OrientedGraph& g, const SubsetView& f);
double mean_boundary_distance(const OrientedGraph& g, const SubsetView& f);

struct GrowthFunctions {
  std::vector<std::int64_t> min_growth;   // f_v(r), r = 0..R
  std::vector<std::int64_t> max_growth;   // f_V(r)
  std::vector<char> boundary_affected;    // some r-ball contains a vertex of deficient degree

  // Smallest r with f(r) >= volume; nullopt when beyond R.
  std::optional<int> min_growth_inverse(std::int64_t volume) const;
  std::optional<int> max_growth_inverse(std::int64_t volume) const;
};
// Centers default to every vertex.
GrowthFunctions growth_functions(const OrientedGraph& g, int radius, std::span<const VertexId> centers = {});
// Cayley balls are vertex-transitive: one sphere count, flagged past the
// ball radius.
GrowthFunctions growth_functions(const CayleyBall& ball, int radius);

struct RadialCheck {
  std::int64_t boundary = 0;
  std::int64_t volume = 0;
  int inradius = 0;
  int diameter = 0;
  double lhs = 0.0;           // K |dA| (1 + inrad)^k
  double rhs = 0.0;           // |A|
  bool holds = false;
  double diameter_lhs = 0.0;  // |dA| (1 + diam)
  bool diameter_holds = false;
};
RadialCheck radial_iso_check(const OrientedGraph& g, const SubsetView& a, double K, double k);

struct OptimalSet {
  std::vector<VertexId> members;
  double ratio = 0.0;
  int inradius = 0;
  int diameter = 0;
  double mean_boundary_distance = 0.0;
  bool optimal = false;  // ratio equals the envelope at |F|
  // 1 / (K ratio^(1/k)) - 1; optimal sets satisfy inradius >= this when the
  // radial inequality holds with (K, k).
  double inradius_lower_bound(double K, double k) const;
};
std::vector<OptimalSet> optimal_sets(const OrientedGraph& g, const IsoProfile& profile);

}  // namespace harmlab
