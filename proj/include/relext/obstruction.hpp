// Discrete circle-valued maps, winding numbers, and an exhaustive search for
// extensions of a boundary circle map over a triangulated disk.  A map into
// Z_n is discretely continuous at step bound L when adjacent residues differ
// by at most L around the circle; 2L < n makes each step's shortest lift
// unique, so the winding number of a loop is well defined.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relext/metric_space.hpp"
#include "relext/point_set.hpp"
#include "relext/relation.hpp"
#include "relext/tietze.hpp"

namespace relext {

// Residue distance on Z_n.
inline unsigned circle_step_distance(unsigned a, unsigned b, std::size_t n) {
    unsigned d = a > b ? a - b : b - a;
    return std::min<unsigned>(d, unsigned(n) - d);
}

// Vertex residues along an ordered vertex list (a loop or a path) with a
// step bound L; codomain is Z_n.
struct DiscreteCircleMap {
    std::size_t n = 0;          // circle resolution, >= 3
    unsigned step_bound = 1;    // L with 2L < n
    std::vector<unsigned> values;
};

inline DiscreteCircleMap make_circle_map(std::size_t n, unsigned step_bound,
                                         std::vector<unsigned> values) {
    if (n < 3) throw std::invalid_argument("DiscreteCircleMap: need n >= 3");
    if (2u * step_bound >= n)
        throw std::invalid_argument("DiscreteCircleMap: need 2L < n for unique lifts");
    for (unsigned v : values)
        if (v >= n)
            throw std::out_of_range("DiscreteCircleMap: residue " + std::to_string(v) +
                                    " not in Z_" + std::to_string(n));
    return DiscreteCircleMap{n, step_bound, std::move(values)};
}

// Signed shortest lift of the step a -> b, in (-n/2, n/2).  Throws when the
// step exceeds the bound, naming the edge.
inline long circle_step_lift(unsigned a, unsigned b, std::size_t n, unsigned step_bound,
                             std::size_t edge_index) {
    const unsigned d = circle_step_distance(a, b, n);
    if (d > step_bound)
        throw std::domain_error("not discretely continuous: step at edge " +
                                std::to_string(edge_index) + " moves " + std::to_string(d) +
                                " > L = " + std::to_string(step_bound));
    long diff = (long(b) - long(a)) % long(n);
    if (2 * diff > long(n)) diff -= long(n);
    if (2 * diff < -long(n)) diff += long(n);
    return diff;
}

// Net number of full turns of the loop m.values (closed by the wrap step
// back to the first vertex).  Sum of the unique lifts divided by n; always
// an integer.
inline long winding_number(const DiscreteCircleMap& m) {
    if (m.values.size() < 3)
        throw std::invalid_argument("winding_number: a loop needs at least 3 vertices");
    long total = 0;
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        const unsigned a = m.values[i];
        const unsigned b = m.values[(i + 1) % m.values.size()];
        total += circle_step_lift(a, b, m.n, m.step_bound, i);
    }
    // Telescoping: the lift sum is a multiple of n for any closed loop.
    return total / long(m.n);
}

// --- triangulated disks --------------------------------------------------

// A disk as a graph with a distinguished boundary cycle.  Edges are
// undirected; the boundary cycle's consecutive edges must all be present and
// the graph connected.
struct TriangulatedDisk {
    std::size_t vertex_count = 0;
    std::vector<IndexPair> edges;
    std::vector<std::size_t> boundary;
};

inline void validate_disk(const TriangulatedDisk& D) {
    if (D.boundary.size() < 3)
        throw std::invalid_argument("TriangulatedDisk: boundary cycle needs >= 3 vertices");
    std::set<IndexPair> edge_set;
    for (auto [u, v] : D.edges) {
        if (u >= D.vertex_count || v >= D.vertex_count)
            throw std::out_of_range("TriangulatedDisk: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("TriangulatedDisk: self-loop edge");
        edge_set.insert({std::min(u, v), std::max(u, v)});
    }
    std::set<std::size_t> bset(D.boundary.begin(), D.boundary.end());
    if (bset.size() != D.boundary.size())
        throw std::invalid_argument("TriangulatedDisk: boundary cycle repeats a vertex");
    for (std::size_t i = 0; i < D.boundary.size(); ++i) {
        std::size_t u = D.boundary[i];
        std::size_t v = D.boundary[(i + 1) % D.boundary.size()];
        if (u >= D.vertex_count || v >= D.vertex_count)
            throw std::out_of_range("TriangulatedDisk: boundary vertex out of range");
        if (!edge_set.count({std::min(u, v), std::max(u, v)}))
            throw std::invalid_argument("TriangulatedDisk: boundary edge (" + std::to_string(u) +
                                        "," + std::to_string(v) + ") missing from edge list");
    }
    // Connectivity over the undirected edge set.
    std::vector<std::size_t> parent(D.vertex_count);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : D.edges) parent[find(u)] = find(v);
    for (std::size_t i = 1; i < D.vertex_count; ++i)
        if (find(i) != find(0))
            throw std::invalid_argument("TriangulatedDisk: graph is not connected");
}

// Wheel: boundary cycle 0..len-1 plus a hub vertex len joined to every
// boundary vertex.  The smallest family of disks with one interior vertex.
inline TriangulatedDisk make_wheel_disk(std::size_t boundary_len) {
    if (boundary_len < 3) throw std::invalid_argument("make_wheel_disk: need length >= 3");
    TriangulatedDisk D;
    D.vertex_count = boundary_len + 1;
    for (std::size_t i = 0; i < boundary_len; ++i) {
        D.boundary.push_back(i);
        D.edges.emplace_back(i, (i + 1) % boundary_len);
        D.edges.emplace_back(i, boundary_len);
    }
    validate_disk(D);
    return D;
}

// --- exhaustive extension search -------------------------------------------

struct SearchCertificate {
    double search_space_size = 0.0; // n^(interior count)
    std::uint64_t nodes_visited = 0; // partial assignments tried
    std::uint64_t leaves_reached = 0;
};

struct ExtensionSearchResult {
    bool exists = false;
    // When exists: residue per disk vertex, consistent on every edge.
    std::vector<unsigned> witness;
    SearchCertificate certificate;
};

// Complete backtracking over interior-vertex assignments with edge
// consistency pruning: a partial assignment dies as soon as one incident
// edge steps farther than L.  Instances are tiny by design, so the search
// stays self-contained and auditable.
inline ExtensionSearchResult brute_force_extension_exists(const TriangulatedDisk& D,
                                                          const DiscreteCircleMap& boundary,
                                                          std::size_t n, unsigned L) {
    validate_disk(D);
    if (n < 3 || 2u * L >= n)
        throw std::invalid_argument("brute_force_extension_exists: need n >= 3 and 2L < n");
    if (boundary.n != n || boundary.step_bound != L)
        throw std::invalid_argument(
            "brute_force_extension_exists: boundary map parameters disagree with n, L");
    if (boundary.values.size() != D.boundary.size())
        throw std::invalid_argument("brute_force_extension_exists: boundary map must assign "
                                    "exactly the boundary cycle");
    // The boundary data must itself be discretely continuous along the cycle.
    for (std::size_t i = 0; i < boundary.values.size(); ++i)
        circle_step_lift(boundary.values[i], boundary.values[(i + 1) % boundary.values.size()],
                         n, L, i);

    constexpr unsigned unassigned = ~0u;
    std::vector<unsigned> value(D.vertex_count, unassigned);
    for (std::size_t i = 0; i < D.boundary.size(); ++i)
        value[D.boundary[i]] = boundary.values[i];

    std::vector<std::size_t> interior;
    for (std::size_t v = 0; v < D.vertex_count; ++v)
        if (value[v] == unassigned) interior.push_back(v);

    std::vector<std::vector<std::size_t>> adjacent(D.vertex_count);
    for (auto [u, v] : D.edges) {
        adjacent[u].push_back(v);
        adjacent[v].push_back(u);
    }

    ExtensionSearchResult result;
    result.certificate.search_space_size = std::pow(double(n), double(interior.size()));

    // Edges with both endpoints on the boundary (cycle edges and any chords)
    // are fixed before the search; one over-long chord empties the search.
    for (auto [u, v] : D.edges)
        if (value[u] != unassigned && value[v] != unassigned &&
            circle_step_distance(value[u], value[v], n) > L)
            return result;

    auto consistent_at = [&](std::size_t v) {
        for (std::size_t w : adjacent[v])
            if (value[w] != unassigned && circle_step_distance(value[v], value[w], n) > L)
                return false;
        return true;
    };

    // depth-first over interior vertices in index order, residues ascending
    std::vector<unsigned> choice(interior.size(), 0);
    std::size_t depth = 0;
    if (interior.empty()) {
        result.certificate.leaves_reached = 1;
        result.exists = true; // nothing to assign; all edges checked above
        result.witness = value;
        return result;
    }
    while (true) {
        if (choice[depth] >= n) {
            value[interior[depth]] = unassigned;
            if (depth == 0) break;
            --depth;
            ++choice[depth];
            continue;
        }
        value[interior[depth]] = choice[depth];
        ++result.certificate.nodes_visited;
        if (!consistent_at(interior[depth])) {
            ++choice[depth];
            continue;
        }
        if (depth + 1 == interior.size()) {
            ++result.certificate.leaves_reached;
            result.exists = true;
            result.witness = value;
            return result;
        }
        ++depth;
        choice[depth] = 0;
    }
    return result;
}

// --- the torus demonstration -------------------------------------------------

// Degree-one boundary residues along a cycle of the given length when the
// step bound allows a full turn, i.e. (len-1)*L >= n-1; constant zeroes
// otherwise.
inline DiscreteCircleMap ramp_boundary_map(std::size_t len, std::size_t n, unsigned L) {
    std::vector<unsigned> values(len, 0);
    if ((len - 1) * std::size_t(L) >= n - 1)
        for (std::size_t j = 0; j < len; ++j)
            values[j] = unsigned(std::min(j * std::size_t(L), n - 1));
    return make_circle_map(n, L, std::move(values));
}

struct TorusDemoParams {
    std::size_t torus_size = 8;  // both circle factors of the sampled torus
    std::size_t circle_n = 8;    // codomain resolution of the boundary map
    unsigned step_bound = 1;
    std::size_t patch_rows = 3;  // grid block carved out of the torus sample
    std::size_t patch_cols = 3;
    std::uint64_t search_cap = 10'000'000; // max leaves tolerated for exhaustion
};

struct TorusDemoReport {
    TorusDemoParams params;
    // Leg (a): the boundary circle map on the patch admits no discrete
    // extension over the disk.
    long boundary_winding = 0;
    bool degree_one_achievable = false;
    std::size_t interior_count = 0;
    ExtensionSearchResult disk_search;
    // Leg (b): the same boundary data, recast as a set-valued map on the
    // torus sample, extends over the whole torus with equality on the patch
    // boundary.
    std::vector<std::size_t> boundary_subset; // torus indices of the patch boundary
    bool set_valued_extension_ok = false;
    bool set_valued_equal_on = false;
};

// Patch boundary walked clockwise from the block's corner; the block must not
// wrap around the torus.
inline std::vector<std::size_t> grid_block_boundary(std::size_t rows, std::size_t cols) {
    std::vector<std::size_t> cycle;
    for (std::size_t c = 0; c < cols - 1; ++c) cycle.push_back(c);
    for (std::size_t r = 0; r < rows - 1; ++r) cycle.push_back(r * cols + (cols - 1));
    for (std::size_t c = cols - 1; c > 0; --c) cycle.push_back((rows - 1) * cols + c);
    for (std::size_t r = rows - 1; r > 0; --r) cycle.push_back(r * cols);
    return cycle;
}

// Triangulated grid block: grid edges plus one diagonal per cell.
inline TriangulatedDisk make_grid_patch(std::size_t rows, std::size_t cols) {
    if (rows < 2 || cols < 2)
        throw std::invalid_argument("make_grid_patch: need at least a 2x2 block");
    TriangulatedDisk D;
    D.vertex_count = rows * cols;
    auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) D.edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) D.edges.emplace_back(id(r, c), id(r + 1, c));
            if (r + 1 < rows && c + 1 < cols) D.edges.emplace_back(id(r, c), id(r + 1, c + 1));
        }
    D.boundary = grid_block_boundary(rows, cols);
    validate_disk(D);
    return D;
}

// Runs both legs at desk scale.  The patch is a grid block of the sampled
// torus; its boundary carries a degree-one circle map when the cycle is long
// enough to turn once.  Refuses resolutions whose exhaustive search would
// exceed the cap.
inline TorusDemoReport torus_non_self_tietze_demo(const TorusDemoParams& params,
                                                  const FiniteMetricSpace** torus_out = nullptr) {
    const auto& P = params;
    if (P.circle_n != P.torus_size)
        throw std::invalid_argument("torus_non_self_tietze_demo: the recast into the torus "
                                    "needs circle_n == torus_size");
    if (P.patch_rows < 2 || P.patch_cols < 2 || P.patch_rows >= P.torus_size ||
        P.patch_cols >= P.torus_size)
        throw std::invalid_argument("torus_non_self_tietze_demo: patch must fit the torus "
                                    "without wrapping");
    TriangulatedDisk patch = make_grid_patch(P.patch_rows, P.patch_cols);
    const std::size_t interior = patch.vertex_count - patch.boundary.size();
    const double space = std::pow(double(P.circle_n), double(interior));
    if (space > double(P.search_cap))
        throw std::invalid_argument(
            "torus_non_self_tietze_demo: exhaustive search would visit up to " +
            std::to_string(std::uint64_t(space)) + " leaves, over the cap of " +
            std::to_string(P.search_cap) + "; lower the resolution");

    TorusDemoReport report;
    report.params = P;
    report.interior_count = interior;

    DiscreteCircleMap boundary = ramp_boundary_map(patch.boundary.size(), P.circle_n,
                                                   P.step_bound);
    report.boundary_winding = winding_number(boundary);
    report.degree_one_achievable = report.boundary_winding != 0;
    report.disk_search = brute_force_extension_exists(patch, boundary, P.circle_n, P.step_bound);

    // Leg (b): residues land on the first circle factor of the torus sample,
    // residue k at torus grid point (k, 0).
    static thread_local FiniteMetricSpace torus = sample_torus(3, 3);
    torus = sample_torus(P.torus_size, P.torus_size);
    if (torus_out) *torus_out = &torus;
    auto torus_id = [&](std::size_t r, std::size_t c) { return r * P.torus_size + c; };
    std::vector<std::size_t> boundary_torus;
    for (std::size_t v : patch.boundary)
        boundary_torus.push_back(torus_id(v / P.patch_cols, v % P.patch_cols));
    report.boundary_subset = boundary_torus;

    ClosedSubset A = make_subset(torus, boundary_torus);
    std::vector<IndexPair> pairs;
    for (std::size_t j = 0; j < boundary_torus.size(); ++j)
        pairs.emplace_back(boundary_torus[j], torus_id(boundary.values[j], 0));
    SetValuedMap f = make_relation_on(torus, A.members, torus, pairs);
    SetValuedMap F = extend_usc(torus, A, f);
    report.set_valued_extension_ok = F.total_on_domain();
    report.set_valued_equal_on = equal_on(F, f, A);
    return report;
}

} // namespace relext
