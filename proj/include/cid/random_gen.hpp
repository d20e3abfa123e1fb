#ifndef CID_RANDOM_GEN_HPP
#define CID_RANDOM_GEN_HPP

#include <cstdint>

#include "cid/graph.hpp"
#include "cid/model.hpp"

namespace cid {

// Fixed PRNG so fuzz corpora are identical across platforms: SplitMix64
// (Steele, Lea & Flood's 64-bit finalizer-based generator). Quality is
// irrelevant here, reproducibility is mandatory.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); n > 0. Modulo bias is irrelevant at these sizes.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Uniform in (0, 1]: strictly positive so random CPT rows never carry a
    // zero entry.
    double positive_unit() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Random DAG: a random topological order over N1..Nn, each forward edge kept
// with probability p, exactly one decision (uniform among non-sinks, or any
// node when the graph has no edges) and one utility (uniform among the
// decision's descendants, else a random other sink). Throws BadParams unless
// 2 <= node_count <= 10 and 0 <= p <= 1.
CidGraph random_graph(int node_count, double edge_probability, std::uint64_t seed);

// Random parameterization: every node gets a domain of the given size
// (utilities 0..k-1, other nodes v0..v{k-1}); every CPT row is a normalized
// strictly positive random vector. Throws BadParams unless 2 <= k <= 4.
CidModel random_model(const CidGraph& graph, int domain_size, std::uint64_t seed);

} // namespace cid

#endif // CID_RANDOM_GEN_HPP
