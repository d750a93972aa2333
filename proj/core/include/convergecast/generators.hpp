#pragma once

#include <cstdint>

#include "convergecast/graph.hpp"

namespace convergecast {

// Interconnection topologies. Vertex (position i, bitstring w) gets id i * 2^d + w;
// the sink is vertex 0.

/// Cube-connected cycles: ring edges (i,w)-(i+1 mod d,w) and cube edges (i,w)-(i,w^2^i).
/// For d = 2 the two ring edges of each corner coincide and are merged.
Graph gen_ccc(int d);

/// Wrapped butterfly: (i,w)-(i+1 mod d,w) and (i,w)-(i+1 mod d,w^2^i), merged when equal.
Graph gen_butterfly(int d);

/// Shuffle-exchange on d-bit strings: exchange edges w-(w^1) and shuffle edges
/// w-rotl(w), skipping rotation fixed points and duplicates.
Graph gen_shuffle_exchange(int d);

/// G(n, p) conditioned on connectivity: whole graphs are redrawn from one RNG
/// stream until connected, at most `max_attempts` times.
Graph gen_pure_random(Vertex n, double p, std::uint64_t seed, int max_attempts = 1000);

/// Flat Waxman model on the unit square: P(u~v) = alpha * exp(-dist / (beta * sqrt(2))).
Graph gen_waxman(Vertex n, double alpha, double beta, std::uint64_t seed, int max_attempts = 1000);

// Small fixtures used by tests and the CLI.
Graph gen_path(Vertex n);
Graph gen_star(Vertex leaves);
Graph gen_cycle(Vertex n);
Graph gen_complete(Vertex n);

}  // namespace convergecast
