#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wrt/random.hpp"
#include "wrt/weights.hpp"

namespace wrt {

using Vertex = std::uint32_t;

enum class AttachMode { FixedOne, RandomOutDegree };

std::string toString(AttachMode mode);
AttachMode parseAttachMode(const std::string& text);

/// Append-only cumulative weight index. Prefix sums are accumulated with
/// Neumaier compensation so each stored prefix is within a few ulps of the
/// exact sum.
class CumIndex {
 public:
  CumIndex() = default;
  explicit CumIndex(std::span<const double> weights);

  void reserve(std::size_t n) { prefix_.reserve(n); }
  void clear();
  void append(double weight);

  std::size_t size() const { return prefix_.size(); }
  bool empty() const { return prefix_.empty(); }
  double total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }
  /// Sum of the first `count` weights.
  double prefix(std::size_t count) const { return count == 0 ? 0.0 : prefix_[count - 1]; }

  /// Label in [1, count] drawn with probability w_i / prefix(count), using
  /// only the first `count` entries. Binary search over prefix sums.
  Vertex sample(std::size_t count, RandomStream& rng) const;
  Vertex sample(RandomStream& rng) const { return sample(size(), rng); }

 private:
  std::vector<double> prefix_;
  double compensation_ = 0.0;
  double running_ = 0.0;
};

/// Draw a parent label from the whole index. Throws std::invalid_argument
/// for an empty index.
Vertex sampleParent(const CumIndex& index, RandomStream& rng);

/// A generated weighted recursive tree (FixedOne) or graph
/// (RandomOutDegree). Vertex labels are 1-based; parents[0] is the root
/// sentinel 0.
struct Wrt {
  std::size_t n = 0;
  AttachMode mode = AttachMode::FixedOne;
  std::vector<double> weights;
  std::vector<Vertex> parents;                     // FixedOne only
  std::vector<std::pair<Vertex, Vertex>> edges;    // RandomOutDegree only, (child, parent)
  std::vector<std::uint32_t> inDegrees;

  Vertex parent(Vertex v) const { return parents.at(v - 1); }
  std::uint32_t inDegree(Vertex v) const { return inDegrees.at(v - 1); }
};

/// i.i.d. weights W_1..W_n from `law`.
std::vector<double> sampleWeights(const WeightLaw& law, std::size_t n, RandomStream& rng);

/// Grow a tree on fixed weights. Deterministic in (weights, mode, rng state).
Wrt generateWithWeights(std::vector<double> weights, AttachMode mode, RandomStream& rng);

/// Sample weights from `law`, then grow. Deterministic in (law, n, mode, seed).
Wrt generate(const WeightLaw& law, std::size_t n, AttachMode mode, std::uint64_t seed);

/// Number of edges of a RandomOutDegree graph. Its mean over replicates is
/// n-1 since each arriving vertex has expected out-degree exactly one.
std::size_t expectedEdgeCount(const Wrt& graph);

/// In-degree sequence only, reusing caller-owned buffers. Used by the
/// replicate kernels where trees are discarded after the census.
struct InDegreeWorkspace {
  std::vector<double> weights;
  CumIndex index;
  std::vector<std::uint32_t> inDegrees;
  std::size_t edges = 0;
};
void growInDegrees(const WeightLaw& law, std::size_t n, AttachMode mode, std::uint64_t seed,
                   InDegreeWorkspace& ws);

/// CSV "child,parent" edge list.
std::string edgeListCsv(const Wrt& tree);

}  // namespace wrt
