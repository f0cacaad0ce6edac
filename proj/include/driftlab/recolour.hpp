#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "driftlab/bits.hpp"
#include "driftlab/rng.hpp"
#include "driftlab/trajectory.hpp"

namespace driftlab::recolour {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

struct Triangle {
  Vertex a = 0, b = 0, c = 0;  // a < b < c
  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

// Simple undirected graph with a stored proper 3-colouring (the witness).
// Edges are normalized to u < v and kept sorted; the triangle list is built
// once, in lexicographic order.
class ColorableGraph {
 public:
  // Throws std::invalid_argument on self-loops, duplicate edges, vertices
  // >= n, witness values outside {0,1,2}, or an edge inside a witness class.
  ColorableGraph(std::uint32_t n, std::vector<Edge> edges, std::vector<std::uint8_t> witness);

  std::uint32_t n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::uint8_t>& witness() const noexcept { return witness_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  bool adjacent(Vertex u, Vertex v) const;

 private:
  std::uint32_t n_;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> witness_;
  std::vector<std::vector<Vertex>> adjacency_;  // sorted neighbour lists
  std::vector<Triangle> triangles_;
};

using TwoColouring = Bits;

// Vertices are shuffled into three classes of near-equal size; each pair
// across classes becomes an edge with probability edge_prob. Requires n >= 3.
ColorableGraph generate_3colorable(RngStream& stream, std::uint32_t n, double edge_prob);

TwoColouring random_colouring(RngStream& stream, std::uint32_t n);

// Lexicographically smallest triangle whose three vertices share a colour.
std::optional<Triangle> seek_monochromatic_triangle(const ColorableGraph& g, const TwoColouring& c);

// Target pairing for the agreement potential: vertices of witness class
// class_a should carry colour_a, those of class_b colour_b.
struct PotentialSpec {
  std::uint8_t class_a = 0;
  std::uint8_t class_b = 1;
  std::uint8_t colour_a = 0;
  std::uint8_t colour_b = 1;

  // Throws std::invalid_argument unless the classes are distinct values in
  // {0,1,2} and the colours are distinct values in {0,1}.
  void validate() const;
};

std::uint32_t class_agreement(const ColorableGraph& g, const TwoColouring& c, const PotentialSpec& spec);

struct RecolourOutcome {
  TwoColouring final;
  std::uint64_t iterations = 0;
  bool censored = false;
  std::optional<Trajectory> trajectory;  // class_agreement per step
};

// While SEEK finds a monochromatic triangle, recolour one of its three
// vertices chosen uniformly. At most `cap` recolourings.
RecolourOutcome run_recolour(const ColorableGraph& g, TwoColouring init, RngStream& stream,
                             std::uint64_t cap, const std::optional<PotentialSpec>& potential = std::nullopt);

// Edge-list text: `n`, then `u v` per line, then `class w0 ... w{n-1}`.
std::string write_graph(const ColorableGraph& g);
// Throws FormatError with the offending line.
ColorableGraph parse_graph(std::string_view text);

}  // namespace driftlab::recolour
