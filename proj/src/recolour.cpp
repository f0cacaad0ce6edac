#include "driftlab/recolour.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <stdexcept>

#include "driftlab/error.hpp"

namespace driftlab::recolour {

ColorableGraph::ColorableGraph(std::uint32_t n, std::vector<Edge> edges, std::vector<std::uint8_t> witness)
    : n_(n), edges_(std::move(edges)), witness_(std::move(witness)), adjacency_(n) {
  if (witness_.size() != n_) throw std::invalid_argument("witness length must equal n");
  for (const auto w : witness_) {
    if (w > 2) throw std::invalid_argument("witness classes must be 0, 1 or 2");
  }
  for (auto& [u, v] : edges_) {
    if (u >= n_ || v >= n_) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (witness_[u] == witness_[v]) {
      throw std::invalid_argument("edge " + std::to_string(u) + "-" + std::to_string(v) + " joins one witness class");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge");
  }
  for (const auto& [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());

  // Edges are visited in lexicographic order and common neighbours w > v in
  // ascending order, so the list comes out sorted.
  for (const auto& [u, v] : edges_) {
    const auto& nu = adjacency_[u];
    const auto& nv = adjacency_[v];
    auto iu = std::upper_bound(nu.begin(), nu.end(), v);
    auto iv = std::upper_bound(nv.begin(), nv.end(), v);
    while (iu != nu.end() && iv != nv.end()) {
      if (*iu < *iv) {
        ++iu;
      } else if (*iv < *iu) {
        ++iv;
      } else {
        triangles_.push_back({u, v, *iu});
        ++iu;
        ++iv;
      }
    }
  }
}

bool ColorableGraph::adjacent(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) return false;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

ColorableGraph generate_3colorable(RngStream& stream, std::uint32_t n, double edge_prob) {
  if (n < 3) throw std::invalid_argument("generate_3colorable: n must be >= 3");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("generate_3colorable: edge_prob must lie in [0,1]");
  std::vector<std::uint8_t> witness(n);
  for (std::uint32_t v = 0; v < n; ++v) witness[v] = static_cast<std::uint8_t>(v % 3);
  for (std::uint32_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::uint32_t>(stream.next_index(i + 1ull));
    std::swap(witness[i], witness[j]);
  }
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (witness[u] != witness[v] && stream.next_bernoulli(edge_prob)) edges.emplace_back(u, v);
    }
  }
  return ColorableGraph(n, std::move(edges), std::move(witness));
}

TwoColouring random_colouring(RngStream& stream, std::uint32_t n) {
  TwoColouring c(n);
  std::uint64_t word = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = stream.next_u64();
    c[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return c;
}

std::optional<Triangle> seek_monochromatic_triangle(const ColorableGraph& g, const TwoColouring& c) {
  if (c.size() != g.n()) throw std::invalid_argument("colouring length != n");
  for (const auto& t : g.triangles()) {
    if (c[t.a] == c[t.b] && c[t.b] == c[t.c]) return t;
  }
  return std::nullopt;
}

void PotentialSpec::validate() const {
  if (class_a > 2 || class_b > 2 || class_a == class_b) {
    throw std::invalid_argument("potential classes must be two distinct values in {0,1,2}");
  }
  if (colour_a > 1 || colour_b > 1 || colour_a == colour_b) {
    throw std::invalid_argument("potential colours must be 0 and 1 in some order");
  }
}

std::uint32_t class_agreement(const ColorableGraph& g, const TwoColouring& c, const PotentialSpec& spec) {
  spec.validate();
  if (c.size() != g.n()) throw std::invalid_argument("class_agreement: colouring length != n");
  std::uint32_t count = 0;
  for (std::uint32_t v = 0; v < g.n(); ++v) {
    const auto cls = g.witness()[v];
    if ((cls == spec.class_a && c[v] == spec.colour_a) || (cls == spec.class_b && c[v] == spec.colour_b)) ++count;
  }
  return count;
}

RecolourOutcome run_recolour(const ColorableGraph& g, TwoColouring init, RngStream& stream,
                             std::uint64_t cap, const std::optional<PotentialSpec>& potential) {
  if (init.size() != g.n()) throw std::invalid_argument("run_recolour: colouring length != n");
  RecolourOutcome out;
  out.final = std::move(init);
  if (potential) {
    potential->validate();
    out.trajectory.emplace();
    out.trajectory->cap = cap;
    out.trajectory->values.push_back(class_agreement(g, out.final, *potential));
  }
  for (;;) {
    const auto tri = seek_monochromatic_triangle(g, out.final);
    if (!tri) break;
    if (out.iterations == cap) {
      out.censored = true;
      break;
    }
    const std::array<Vertex, 3> corners{tri->a, tri->b, tri->c};
    const Vertex v = corners[stream.next_index(3)];
    out.final[v] ^= 1u;
    ++out.iterations;
    if (potential) {
      // Only v changed, so the potential moves by at most one.
      double y = out.trajectory->values.back();
      const auto cls = g.witness()[v];
      const bool tracked = cls == potential->class_a || cls == potential->class_b;
      if (tracked) {
        const auto target = cls == potential->class_a ? potential->colour_a : potential->colour_b;
        y += (out.final[v] == target) ? 1.0 : -1.0;
      }
      out.trajectory->values.push_back(y);
    }
  }
  if (out.trajectory) out.trajectory->censored = out.censored;
  return out;
}

std::string write_graph(const ColorableGraph& g) {
  std::string out = std::to_string(g.n()) + "\n";
  for (const auto& [u, v] : g.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  out += "class";
  for (const auto w : g.witness()) out += " " + std::to_string(w);
  out += "\n";
  return out;
}

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t s = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > s) out.push_back(line.substr(s, i - s));
  }
  return out;
}

std::uint32_t to_u32(std::string_view tok, std::size_t line) {
  std::uint32_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw FormatError(line, "expected a non-negative integer, got '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

ColorableGraph parse_graph(std::string_view text) {
  std::optional<std::uint32_t> n;
  std::vector<Edge> edges;
  std::optional<std::vector<std::uint8_t>> witness;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    const auto toks = tokens(line);
    if (toks.empty()) continue;
    if (!n) {
      if (toks.size() != 1) throw FormatError(line_no, "first line must hold the vertex count");
      n = to_u32(toks[0], line_no);
      continue;
    }
    if (toks[0] == "class") {
      if (witness) throw FormatError(line_no, "duplicate class line");
      if (toks.size() != *n + 1) throw FormatError(line_no, "class line must list one class per vertex");
      witness.emplace();
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const auto w = to_u32(toks[i], line_no);
        if (w > 2) throw FormatError(line_no, "class values must be 0, 1 or 2");
        witness->push_back(static_cast<std::uint8_t>(w));
      }
      continue;
    }
    if (toks.size() != 2) throw FormatError(line_no, "edge lines hold exactly two vertices");
    const auto u = to_u32(toks[0], line_no);
    const auto v = to_u32(toks[1], line_no);
    if (u >= *n || v >= *n) throw FormatError(line_no, "vertex out of range");
    edges.emplace_back(u, v);
  }
  if (!n) throw FormatError(line_no, "empty graph file");
  if (!witness) throw FormatError(line_no, "missing class line");
  try {
    return ColorableGraph(*n, std::move(edges), std::move(*witness));
  } catch (const std::invalid_argument& e) {
    throw FormatError(line_no, e.what());
  }
}

}  // namespace driftlab::recolour
