// Closed-relation dynamics on a finite space: trajectories, reachability
// fixpoints, and the partial-to-total upgrade.  Partial relations (empty
// images allowed) live only here; everywhere else totality is an invariant.
// On a finite space an infinite forward trajectory exists from x iff x
// reaches a point lying on a cycle, decided by SCC condensation.
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relext/metric_space.hpp"
#include "relext/point_set.hpp"
#include "relext/relation.hpp"

namespace relext {

// Relaxed relation on one space: images may be empty, so orbits can strand.
class PartialRelation {
public:
    PartialRelation(const FiniteMetricSpace& space, std::span<const IndexPair> pairs)
        : space_(&space), rows_(space.size(), PointSet(space.size())) {
        for (const auto& [x, y] : pairs) {
            if (x >= space.size() || y >= space.size())
                throw std::out_of_range("PartialRelation: pair (" + std::to_string(x) + "," +
                                        std::to_string(y) + ") out of range");
            rows_[x].insert(y);
        }
    }

    const FiniteMetricSpace& space() const { return *space_; }
    std::size_t size() const { return rows_.size(); }
    const PointSet& image(std::size_t x) const { return rows_.at(x); }
    bool has_pair(std::size_t x, std::size_t y) const { return rows_.at(x).contains(y); }

    // Points with nonempty image; the domain on which the relation is a
    // genuine set-valued map.
    PointSet defined_set() const {
        PointSet out(rows_.size());
        for (std::size_t x = 0; x < rows_.size(); ++x)
            if (!rows_[x].empty()) out.insert(x);
        return out;
    }

private:
    const FiniteMetricSpace* space_;
    std::vector<PointSet> rows_;
};

inline PartialRelation make_partial_relation(const FiniteMetricSpace& space,
                                             std::span<const IndexPair> pairs) {
    return PartialRelation(space, pairs);
}

inline PartialRelation make_partial_relation(const FiniteMetricSpace& space,
                                             std::initializer_list<IndexPair> pairs) {
    return PartialRelation(space, std::span<const IndexPair>(pairs.begin(), pairs.size()));
}

// View of a total map as a partial relation on its whole domain space;
// points outside the domain of definition simply strand.
inline PartialRelation as_partial(const SetValuedMap& F) {
    if (F.domain().size() != F.codomain().size())
        throw std::invalid_argument("as_partial: dynamics need a self-relation");
    return PartialRelation(F.domain(), F.pairs());
}

// The total map carried by a partial relation on its defined set.
inline SetValuedMap total_on_defined(const PartialRelation& P) {
    PointSet defined = P.defined_set();
    if (defined.empty())
        throw std::domain_error("total_on_defined: every image is empty");
    std::vector<IndexPair> pairs;
    defined.for_each([&](std::size_t x) {
        P.image(x).for_each([&](std::size_t y) { pairs.emplace_back(x, y); });
    });
    return make_relation_on(P.space(), defined.to_indices(), P.space(), pairs);
}

// --- trajectories -----------------------------------------------------------

using Trajectory = std::vector<std::size_t>;

// True iff every consecutive pair lies in the graph; a single point is
// always a trajectory.
inline bool is_trajectory(const PartialRelation& F, std::span<const std::size_t> seq) {
    if (seq.empty())
        throw std::invalid_argument("is_trajectory: sequence must be nonempty");
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (seq[i] >= F.size())
            throw std::out_of_range("is_trajectory: index " + std::to_string(seq[i]) +
                                    " out of range");
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!F.has_pair(seq[i], seq[i + 1])) return false;
    return true;
}

inline bool is_trajectory(const SetValuedMap& F, std::span<const std::size_t> seq) {
    return is_trajectory(as_partial(F), seq);
}

// --- reachability -----------------------------------------------------------

inline PointSet partial_forward_image(const PartialRelation& F, const PointSet& S) {
    PointSet out(F.size());
    S.for_each([&](std::size_t x) { out.unite(F.image(x)); });
    return out;
}

// k-fold forward image; k = 0 returns S itself.
inline PointSet forward_reach(const PartialRelation& F, const PointSet& S, std::size_t k) {
    PointSet cur = S;
    for (std::size_t step = 0; step < k; ++step) cur = partial_forward_image(F, cur);
    return cur;
}

inline PointSet forward_reach(const SetValuedMap& F, const PointSet& S, std::size_t k) {
    return forward_reach(as_partial(F), S, k);
}

// Least fixpoint of S -> S + forward(S) seeded at {x}; stabilises within
// size() iterations.
inline PointSet reachable_set(const PartialRelation& F, std::size_t x) {
    if (x >= F.size())
        throw std::out_of_range("reachable_set: index " + std::to_string(x) + " out of range");
    PointSet seen(F.size());
    seen.insert(x);
    std::vector<std::size_t> frontier{x};
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t v : frontier)
            F.image(v).for_each([&](std::size_t y) {
                if (!seen.contains(y)) {
                    seen.insert(y);
                    next.push_back(y);
                }
            });
        frontier = std::move(next);
    }
    return seen;
}

inline PointSet reachable_set(const SetValuedMap& F, std::size_t x) {
    return reachable_set(as_partial(F), x);
}

// --- infinite trajectories ----------------------------------------------

namespace detail {

// Iterative Tarjan; returns the SCC id of every vertex plus, per vertex,
// whether it lies on a cycle (nontrivial SCC or a self-loop).
inline std::vector<bool> cyclic_vertices(const PartialRelation& F) {
    const std::size_t n = F.size();
    constexpr std::size_t undef = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, undef), low(n, 0), comp(n, undef);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> comp_size;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::vector<std::size_t> succ;
        std::size_t next = 0;
    };

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != undef) continue;
        std::vector<Frame> call;
        call.push_back({root, F.image(root).to_indices()});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < f.succ.size()) {
                std::size_t w = f.succ[f.next++];
                if (index[w] == undef) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, F.image(w).to_indices()});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    const std::size_t id = comp_size.size();
                    std::size_t members = 0;
                    while (true) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = id;
                        ++members;
                        if (w == f.v) break;
                    }
                    comp_size.push_back(members);
                }
                std::size_t v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }

    std::vector<bool> cyclic(n, false);
    for (std::size_t v = 0; v < n; ++v)
        cyclic[v] = comp_size[comp[v]] > 1 || F.has_pair(v, v);
    return cyclic;
}

} // namespace detail

struct InfiniteTrajectoryResult {
    bool exists = false;
    // When exists: a trajectory from x to a cyclic vertex, followed by one
    // full loop around its cycle.  Every prefix is a valid trajectory.
    Trajectory witness;
};

// Decides whether some infinite forward trajectory starts at x.  On a finite
// space this is exactly "x reaches a vertex on a cycle"; a total relation
// makes it true everywhere by pigeonhole.
inline InfiniteTrajectoryResult exists_infinite_trajectory_witness(const PartialRelation& F,
                                                                   std::size_t x) {
    if (x >= F.size())
        throw std::out_of_range("exists_infinite_trajectory: index out of range");
    const std::vector<bool> cyclic = detail::cyclic_vertices(F);

    // BFS from x recording parents so the witness path is reconstructible.
    constexpr std::size_t undef = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(F.size(), undef);
    std::vector<std::size_t> order{x};
    PointSet seen(F.size());
    seen.insert(x);
    std::size_t hit = cyclic[x] ? x : undef;
    for (std::size_t head = 0; head < order.size() && hit == undef; ++head) {
        const std::size_t v = order[head];
        F.image(v).for_each([&](std::size_t y) {
            if (hit != undef || seen.contains(y)) return;
            seen.insert(y);
            parent[y] = v;
            order.push_back(y);
            if (cyclic[y]) hit = y;
        });
    }
    if (hit == undef) return {};

    InfiniteTrajectoryResult result;
    result.exists = true;
    Trajectory path;
    for (std::size_t v = hit; v != undef; v = parent[v]) {
        path.push_back(v);
        if (v == x) break;
    }
    std::reverse(path.begin(), path.end());

    // One loop around hit's cycle: BFS within edges from hit back to itself.
    if (F.has_pair(hit, hit)) {
        path.push_back(hit);
    } else {
        std::vector<std::size_t> lparent(F.size(), undef);
        PointSet lseen(F.size());
        std::vector<std::size_t> lorder;
        F.image(hit).for_each([&](std::size_t y) {
            if (!lseen.contains(y)) {
                lseen.insert(y);
                lorder.push_back(y);
            }
        });
        std::size_t back = undef;
        for (std::size_t head = 0; head < lorder.size() && back == undef; ++head) {
            const std::size_t v = lorder[head];
            if (v == hit) {
                back = v;
                break;
            }
            F.image(v).for_each([&](std::size_t y) {
                if (!lseen.contains(y)) {
                    lseen.insert(y);
                    lparent[y] = v;
                    lorder.push_back(y);
                }
            });
        }
        Trajectory loop;
        for (std::size_t v = back; v != undef; v = lparent[v]) loop.push_back(v);
        std::reverse(loop.begin(), loop.end());
        path.insert(path.end(), loop.begin(), loop.end());
    }
    result.witness = std::move(path);
    return result;
}

inline bool exists_infinite_trajectory(const PartialRelation& F, std::size_t x) {
    return exists_infinite_trajectory_witness(F, x).exists;
}

inline bool exists_infinite_trajectory(const SetValuedMap& F, std::size_t x) {
    return exists_infinite_trajectory(as_partial(F), x);
}

} // namespace relext
