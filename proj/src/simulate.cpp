#include "wrt/simulate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wrt {

std::string toString(AttachMode mode) {
  return mode == AttachMode::FixedOne ? "fixed" : "random-out";
}

AttachMode parseAttachMode(const std::string& text) {
  if (text == "fixed") return AttachMode::FixedOne;
  if (text == "random-out") return AttachMode::RandomOutDegree;
  throw std::invalid_argument("mode must be 'fixed' or 'random-out', got '" + text + "'");
}

CumIndex::CumIndex(std::span<const double> weights) {
  prefix_.reserve(weights.size());
  for (double w : weights) append(w);
}

void CumIndex::clear() {
  prefix_.clear();
  compensation_ = 0.0;
  running_ = 0.0;
}

void CumIndex::append(double weight) {
  const double t = running_ + weight;
  if (std::abs(running_) >= std::abs(weight))
    compensation_ += (running_ - t) + weight;
  else
    compensation_ += (weight - t) + running_;
  running_ = t;
  prefix_.push_back(running_ + compensation_);
}

Vertex CumIndex::sample(std::size_t count, RandomStream& rng) const {
  const double u = rng.uniform() * prefix_[count - 1];
  // Branchless upper_bound: first position whose prefix exceeds u.
  const double* data = prefix_.data();
  const double* base = data;
  std::size_t len = count;
  while (len > 1) {
    const std::size_t half = len / 2;
    __builtin_prefetch(base + half / 2 - 1);
    __builtin_prefetch(base + half + half / 2 - 1);
    base = (base[half - 1] <= u) ? base + half : base;
    len -= half;
  }
  std::size_t pos = static_cast<std::size_t>(base - data);
  if (*base <= u) ++pos;
  if (pos >= count) pos = count - 1;
  return static_cast<Vertex>(pos + 1);
}

Vertex sampleParent(const CumIndex& index, RandomStream& rng) {
  if (index.empty()) throw std::invalid_argument("sampleParent: empty index");
  return index.sample(rng);
}

std::vector<double> sampleWeights(const WeightLaw& law, std::size_t n, RandomStream& rng) {
  std::vector<double> w(n);
  for (auto& x : w) x = law.sample(rng);
  return w;
}

namespace {

// Shared growth loop. onEdge(child, parent) is called for every edge in
// arrival order.
template <class OnEdge>
void grow(std::span<const double> weights, CumIndex& index, AttachMode mode, RandomStream& rng,
          OnEdge&& onEdge) {
  const std::size_t n = weights.size();
  index.clear();
  index.reserve(n);
  if (n == 0) return;
  index.append(weights[0]);
  for (std::size_t k = 1; k < n; ++k) {
    const auto child = static_cast<Vertex>(k + 1);
    if (mode == AttachMode::FixedOne) {
      onEdge(child, index.sample(k, rng));
    } else {
      const double total = index.prefix(k);
      if (total <= 1.0) {
        for (std::size_t i = 0; i < k; ++i)
          if (rng.uniform() * total < weights[i]) onEdge(child, static_cast<Vertex>(i + 1));
      } else {
        // Candidates arrive as a Bernoulli(1/S_k) process; candidate i is kept
        // with probability W_i, so each i is linked with probability W_i/S_k.
        const double logq = std::log1p(-1.0 / total);
        double pos = 0.0;
        for (;;) {
          pos += 1.0 + std::floor(std::log(rng.uniformOpenClosed()) / logq);
          if (pos > static_cast<double>(k)) break;
          const auto i = static_cast<std::size_t>(pos);
          if (rng.uniform() < weights[i - 1]) onEdge(child, static_cast<Vertex>(i));
        }
      }
    }
    index.append(weights[k]);
  }
}

}  // namespace

Wrt generateWithWeights(std::vector<double> weights, AttachMode mode, RandomStream& rng) {
  if (weights.empty()) throw std::invalid_argument("generate: n must be at least 1");
  Wrt tree;
  tree.n = weights.size();
  tree.mode = mode;
  tree.weights = std::move(weights);
  tree.inDegrees.assign(tree.n, 0);
  if (mode == AttachMode::FixedOne) tree.parents.assign(tree.n, 0);
  CumIndex index;
  grow(tree.weights, index, mode, rng, [&](Vertex child, Vertex parent) {
    ++tree.inDegrees[parent - 1];
    if (mode == AttachMode::FixedOne)
      tree.parents[child - 1] = parent;
    else
      tree.edges.emplace_back(child, parent);
  });
  return tree;
}

Wrt generate(const WeightLaw& law, std::size_t n, AttachMode mode, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate: n must be at least 1");
  RandomStream rng(seed);
  auto weights = sampleWeights(law, n, rng);
  return generateWithWeights(std::move(weights), mode, rng);
}

std::size_t expectedEdgeCount(const Wrt& graph) {
  if (graph.mode != AttachMode::RandomOutDegree)
    throw std::invalid_argument("expectedEdgeCount requires a random out-degree graph");
  return graph.edges.size();
}

void growInDegrees(const WeightLaw& law, std::size_t n, AttachMode mode, std::uint64_t seed,
                   InDegreeWorkspace& ws) {
  if (n == 0) throw std::invalid_argument("generate: n must be at least 1");
  RandomStream rng(seed);
  ws.weights.resize(n);
  for (auto& x : ws.weights) x = law.sample(rng);
  ws.inDegrees.assign(n, 0);
  ws.edges = 0;
  grow(ws.weights, ws.index, mode, rng, [&](Vertex, Vertex parent) {
    ++ws.inDegrees[parent - 1];
    ++ws.edges;
  });
}

std::string edgeListCsv(const Wrt& tree) {
  std::ostringstream os;
  os << "child,parent\n";
  if (tree.mode == AttachMode::FixedOne) {
    for (std::size_t v = 2; v <= tree.n; ++v) os << v << ',' << tree.parents[v - 1] << '\n';
  } else {
    for (const auto& [c, p] : tree.edges) os << c << ',' << p << '\n';
  }
  return os.str();
}

}  // namespace wrt
