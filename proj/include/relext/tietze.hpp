// Extension of usc set-valued maps from closed subsets via the nearest-point
// multivalued retraction, the single-valued retraction variant, and the
// normality separation witnesses the extension yields.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relext/metric_space.hpp"
#include "relext/parallel.hpp"
#include "relext/point_set.hpp"
#include "relext/relation.hpp"

namespace relext {

// Argmin slack for the nearest-point scan.  Exact matrices admit exact ties;
// floating-point circle samples create near-ties that an absolute-zero test
// would drop, losing mandated tie points.  A distance minimum of exactly zero
// pins the unique nearest point x itself, so no slack applies there.
inline double argmin_tolerance(const FiniteMetricSpace& M, double dist_min) {
    if (dist_min == 0.0) return 0.0;
    return M.integer_valued() ? 0.0 : 1e-9 * (1.0 + dist_min);
}

// The nearest-point multivalued projection onto A:
//   graph = {(x, y) : y in A, d(x, y) <= dist(x, A) + tau}.
// Total, since the minimum over a finite A is attained; fixes A pointwise
// with singleton images because dist(x, A) = 0 iff x in A.
inline SetValuedMap nearest_point_graph(const FiniteMetricSpace& M, const ClosedSubset& A,
                                        std::optional<double> tau_override = std::nullopt) {
    if (A.members.empty())
        throw std::domain_error("nearest_point_graph: A must be nonempty");
    if (A.space != &M)
        throw std::invalid_argument("nearest_point_graph: A belongs to a different space");
    const std::size_t n = M.size();
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::vector<PointSet> rows(n, PointSet(n));
    parallel_for(0, n, [&](std::size_t x) {
        const double dmin = dist_to_set(M, x, A);
        const double tau = tau_override ? *tau_override : argmin_tolerance(M, dmin);
        for (std::size_t a : A.members)
            if (M.distance(x, a) <= dmin + tau) rows[x].insert(a);
    });
    return SetValuedMap(M, M, std::move(all), std::move(rows));
}

// Theorem-style extension: F = f after the nearest-point projection g, so
// F(x) = union of f(a) over nearest points a of x.  F is total on X and
// agrees with f on A exactly.
inline SetValuedMap extend_usc(const FiniteMetricSpace& M, const ClosedSubset& A,
                               const SetValuedMap& f,
                               std::optional<double> tau_override = std::nullopt) {
    if (&f.domain() != &M || &f.codomain() != &M)
        throw std::invalid_argument("extend_usc: f must map a subset of M into M");
    if (f.support() != A.members)
        throw std::invalid_argument("extend_usc: f's domain of definition must be exactly A");
    return compose(nearest_point_graph(M, A, tau_override), f);
}

// Single-valued retraction r : X -> A fixing A pointwise.
struct Retraction {
    const FiniteMetricSpace* space = nullptr;
    std::vector<std::size_t> target; // members of A, sorted
    std::vector<std::size_t> assign; // assign[x] in target; assign[a] == a on target
};

inline void validate_retraction(const Retraction& r) {
    const std::size_t n = r.space->size();
    if (r.assign.size() != n)
        throw std::invalid_argument("Retraction: assignment must cover the whole space");
    PointSet tgt = PointSet::of(n, r.target);
    for (std::size_t x = 0; x < n; ++x)
        if (!tgt.contains(r.assign[x]))
            throw std::invalid_argument("Retraction: assign(" + std::to_string(x) +
                                        ") lands outside the target");
    for (std::size_t a : r.target)
        if (r.assign[a] != a)
            throw std::invalid_argument("Retraction: target point " + std::to_string(a) +
                                        " is not fixed");
}

// Selection from the nearest-point graph: lowest-index nearest member of A.
// Deterministic; on sampled continua the selection can be discontinuous
// across a tie locus, which the multivalued graph avoids.
inline Retraction nearest_point_retraction(const FiniteMetricSpace& M, const ClosedSubset& A) {
    if (A.members.empty())
        throw std::domain_error("nearest_point_retraction: A must be nonempty");
    SetValuedMap g = nearest_point_graph(M, A);
    Retraction r;
    r.space = &M;
    r.target = A.members;
    r.assign.resize(M.size());
    for (std::size_t x = 0; x < M.size(); ++x) r.assign[x] = g.image(x).lowest();
    validate_retraction(r);
    return r;
}

// Retraction-based extension F(x) = f(r(x)).  Agrees with f on A and pulls
// lower preimages back through r: {x : F(x) meets C} = {x : r(x) in f^-1(C)}.
inline SetValuedMap extend_via_retraction(const SetValuedMap& f, const Retraction& r) {
    if (&f.domain() != r.space)
        throw std::invalid_argument("extend_via_retraction: retraction space mismatch");
    if (f.support() != r.target)
        throw std::invalid_argument(
            "extend_via_retraction: retraction target must equal f's domain of definition");
    const std::size_t n = r.space->size();
    std::vector<std::size_t> all(n);
    std::vector<PointSet> rows;
    rows.reserve(n);
    for (std::size_t x = 0; x < n; ++x) {
        all[x] = x;
        rows.push_back(f.image(r.assign[x]));
    }
    return SetValuedMap(f.domain(), f.codomain(), std::move(all), std::move(rows));
}

// --- separation witnesses ---------------------------------------------------

// Normality witness for disjoint nonempty closed A, B: extend the two-valued
// map f(A) = {a}, f(B) = {b} over X and read off the open sets
// O_A = {x : F(x) in U}, O_B = {x : F(x) in V} for disjoint balls U, V.
// Thirds of d(a, b) is the canonical ball radius; lowest-index a, b keep the
// trace reproducible.
struct SeparationTrace {
    std::size_t a = 0, b = 0;
    double radius = 0.0;
    PointSet U, V;
    PointSet O_A, O_B;
};

inline SeparationTrace separation_witness(const FiniteMetricSpace& M, const ClosedSubset& A,
                                          const ClosedSubset& B) {
    if (A.members.empty() || B.members.empty())
        throw std::invalid_argument("separation_witness: A and B must be nonempty");
    if (A.space != &M || B.space != &M)
        throw std::invalid_argument("separation_witness: subsets belong to a different space");
    PointSet pa = A.as_point_set(), pb = B.as_point_set();
    if (pa.intersects(pb))
        throw std::invalid_argument("separation_witness: A and B must be disjoint");

    SeparationTrace trace;
    trace.a = A.members.front();
    trace.b = B.members.front();
    trace.radius = M.distance(trace.a, trace.b) / 3.0;

    std::vector<std::size_t> domain = A.members;
    domain.insert(domain.end(), B.members.begin(), B.members.end());
    std::sort(domain.begin(), domain.end());
    ClosedSubset AB = make_subset(M, domain);

    std::vector<IndexPair> pairs;
    pairs.reserve(domain.size());
    for (std::size_t x : A.members) pairs.emplace_back(x, trace.a);
    for (std::size_t x : B.members) pairs.emplace_back(x, trace.b);
    SetValuedMap f = make_relation_on(M, AB.members, M, pairs);
    SetValuedMap F = extend_usc(M, AB, f);

    trace.U = PointSet(M.size());
    trace.V = PointSet(M.size());
    for (std::size_t y = 0; y < M.size(); ++y) {
        if (M.distance(trace.a, y) < trace.radius) trace.U.insert(y);
        if (M.distance(trace.b, y) < trace.radius) trace.V.insert(y);
    }
    trace.O_A = upper_inverse(F, trace.U);
    trace.O_B = upper_inverse(F, trace.V);

    // Unconditional by construction; a failure here is a bug, not bad input.
    if (!pa.is_subset_of(trace.O_A) || !pb.is_subset_of(trace.O_B) ||
        trace.O_A.intersects(trace.O_B))
        throw std::logic_error("separation_witness: construction guarantees violated");
    return trace;
}

// Clopen-flavoured witness: for a nontrivial E that is a union of
// components at the given gap, extend f with values a in E, b outside E and
// return the closed neighbourhood {x : F(x) meets E} of A avoiding B, with
// A inside the open core {x : F(x) in E}.
struct ClopenWitnessTrace {
    std::size_t a = 0, b = 0;
    PointSet E;
    PointSet open_core;    // upper_inverse(F, E)
    PointSet closed_nbhd;  // lower_preimage(F, E)
};

inline ClopenWitnessTrace clopen_separation_witness(const FiniteMetricSpace& M,
                                                    const ClosedSubset& A, const ClosedSubset& B,
                                                    const PointSet& E, double gap) {
    const std::size_t n = M.size();
    if (E.universe_size() != n)
        throw std::invalid_argument("clopen_separation_witness: E universe mismatch");
    if (E.empty() || E.count() == n)
        throw std::invalid_argument("clopen_separation_witness: E must be a nontrivial subset");
    for (const auto& comp : components_at_gap(M, gap)) {
        std::size_t inside = 0;
        for (std::size_t i : comp) inside += E.contains(i) ? 1 : 0;
        if (inside != 0 && inside != comp.size())
            throw std::invalid_argument(
                "clopen_separation_witness: E splits the component containing point " +
                std::to_string(comp.front()) + "; it must be a union of components at this gap");
    }
    PointSet pa = A.as_point_set(), pb = B.as_point_set();
    if (pa.intersects(pb))
        throw std::invalid_argument("clopen_separation_witness: A and B must be disjoint");

    ClopenWitnessTrace trace;
    trace.E = E;
    trace.a = E.lowest();
    trace.b = E.complement().lowest();

    std::vector<std::size_t> domain = A.members;
    domain.insert(domain.end(), B.members.begin(), B.members.end());
    std::sort(domain.begin(), domain.end());
    ClosedSubset AB = make_subset(M, domain);

    std::vector<IndexPair> pairs;
    for (std::size_t x : A.members) pairs.emplace_back(x, trace.a);
    for (std::size_t x : B.members) pairs.emplace_back(x, trace.b);
    SetValuedMap f = make_relation_on(M, AB.members, M, pairs);
    SetValuedMap F = extend_usc(M, AB, f);

    trace.open_core = upper_inverse(F, E);
    trace.closed_nbhd = lower_preimage(F, E);

    if (!pa.is_subset_of(trace.open_core) || !trace.open_core.is_subset_of(trace.closed_nbhd) ||
        trace.closed_nbhd.intersects(pb))
        throw std::logic_error("clopen_separation_witness: construction guarantees violated");
    return trace;
}

} // namespace relext
