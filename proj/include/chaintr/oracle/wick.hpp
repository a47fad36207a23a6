#pragma once

#include "chaintr/model/chain_model.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace chaintr {

// One trace tr M_i^p of the correlator.
struct TraceWord {
    int matrix = 1;
    int power = 0;
};

// A ribbon graph: vertices are trace words, half-edges are numbered in
// cyclic order around each vertex, the matching glues them in pairs.
struct PairingDiagram {
    std::vector<TraceWord> words;
    std::vector<int> match;  // match[h] = partner of half-edge h
    int faces = 0;
    bool connected = true;
    int genus = 0;           // from V - E + F = 2 - 2g (connected diagrams)
};

constexpr int kMaxHalfEdges = 16;
constexpr int kMaxInsertions = 3;

// Every perfect matching of the half-edges of the given words, with its genus.
// Matrix indices are ignored (single-matrix counting); throws past kMaxHalfEdges.
std::vector<PairingDiagram> pairing_diagrams(const std::vector<TraceWord>& words);

// Number of connected pairings by genus.
std::map<int, std::uint64_t> genus_counts(const std::vector<TraceWord>& words);

// Connected genus-g Wick value of <prod tr M_{i}^{p}> in the normalization of
// the engine's moments: propagator T (C^-1)_{ij}, where C is the quadratic form
// of the chain (C_ii = g_2^(i), C_{i,i+1} = -c_{i,i+1}); every other coupling
// g_k^(i) is a vertex insertion of weight -(g_k^(i) / k) / T.
// by_order[m] is the part with m insertion vertices, m <= max_insertions.
struct WickExpansion {
    std::vector<Rational> by_order;
    Rational total() const;
};

WickExpansion wick_expansion(const ChainModel& model, const std::vector<TraceWord>& traces, int genus,
                             int max_insertions = kMaxInsertions);

// Sum of the expansion (exact for a quadratic backbone).
Rational wick_moments(const ChainModel& model, const std::vector<TraceWord>& traces, int genus,
                      int max_insertions = kMaxInsertions);

// Inverse of the chain's quadratic form.
std::vector<std::vector<Rational>> chain_propagator(const ChainModel& model);

}  // namespace chaintr
