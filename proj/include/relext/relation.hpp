// Set-valued maps as total relations.  A map f : A -> 2^Y is stored against
// the ambient domain space with an explicit support A; points of A are points
// of the domain space, so composing g : X -> 2^A with f never re-indexes.
// Images are nonempty by construction — the empty set is not an element of
// 2^Y and failing early keeps every downstream postcondition unconditional.
#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relext/metric_space.hpp"
#include "relext/parallel.hpp"
#include "relext/point_set.hpp"

namespace relext {

using IndexPair = std::pair<std::size_t, std::size_t>;

class SetValuedMap {
public:
    SetValuedMap(const FiniteMetricSpace& domain, const FiniteMetricSpace& codomain,
                 std::vector<std::size_t> support, std::vector<PointSet> rows)
        : domain_(&domain), codomain_(&codomain), support_(std::move(support)),
          rows_(std::move(rows)), row_of_(domain.size(), npos) {
        if (support_.empty())
            throw std::invalid_argument("SetValuedMap: support must be nonempty");
        if (support_.size() != rows_.size())
            throw std::invalid_argument("SetValuedMap: one image row per support point required");
        for (std::size_t r = 0; r < support_.size(); ++r) {
            const std::size_t x = support_[r];
            if (x >= domain.size())
                throw std::out_of_range("SetValuedMap: support point " + std::to_string(x) +
                                        " outside domain of size " + std::to_string(domain.size()));
            if (r > 0 && support_[r - 1] >= x)
                throw std::invalid_argument("SetValuedMap: support must be sorted and unique");
            if (rows_[r].universe_size() != codomain.size())
                throw std::invalid_argument("SetValuedMap: image row universe mismatch");
            if (rows_[r].empty())
                throw std::invalid_argument("SetValuedMap: empty image at " + std::to_string(x));
            row_of_[x] = r;
        }
    }

    const FiniteMetricSpace& domain() const { return *domain_; }
    const FiniteMetricSpace& codomain() const { return *codomain_; }
    const std::vector<std::size_t>& support() const { return support_; }
    bool total_on_domain() const { return support_.size() == domain_->size(); }
    bool defined_at(std::size_t x) const { return x < row_of_.size() && row_of_[x] != npos; }

    const PointSet& image(std::size_t x) const {
        if (x >= row_of_.size() || row_of_[x] == npos)
            throw std::out_of_range("SetValuedMap: image requested at " + std::to_string(x) +
                                    ", which is outside the map's domain of definition");
        return rows_[row_of_[x]];
    }

    bool has_pair(std::size_t x, std::size_t y) const {
        return defined_at(x) && rows_[row_of_[x]].contains(y);
    }

    // All graph pairs, sorted by (x, y); the canonical serialized form.
    std::vector<IndexPair> pairs() const {
        std::vector<IndexPair> out;
        for (std::size_t r = 0; r < support_.size(); ++r)
            rows_[r].for_each([&](std::size_t y) { out.emplace_back(support_[r], y); });
        return out;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    const FiniteMetricSpace* domain_;
    const FiniteMetricSpace* codomain_;
    std::vector<std::size_t> support_;
    std::vector<PointSet> rows_;
    std::vector<std::size_t> row_of_;
};

inline bool graph_equal(const SetValuedMap& F, const SetValuedMap& G) {
    if (F.domain().size() != G.domain().size() ||
        F.codomain().size() != G.codomain().size() || F.support() != G.support())
        return false;
    for (std::size_t x : F.support())
        if (!(F.image(x) == G.image(x))) return false;
    return true;
}

// --- constructors ---------------------------------------------------------

// Validated relation defined on the listed support points only.  Rejects any
// support point with an empty image, naming the offending x.
inline SetValuedMap make_relation_on(const FiniteMetricSpace& domain,
                                     std::span<const std::size_t> support,
                                     const FiniteMetricSpace& codomain,
                                     std::span<const IndexPair> pairs) {
    std::vector<std::size_t> sup(support.begin(), support.end());
    std::sort(sup.begin(), sup.end());
    sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
    if (sup.empty())
        throw std::invalid_argument("make_relation_on: support must be nonempty");
    if (sup.back() >= domain.size())
        throw std::out_of_range("make_relation_on: support point " + std::to_string(sup.back()) +
                                " outside domain of size " + std::to_string(domain.size()));
    std::vector<PointSet> rows(sup.size(), PointSet(codomain.size()));
    auto row_index = [&](std::size_t x) {
        auto it = std::lower_bound(sup.begin(), sup.end(), x);
        if (it == sup.end() || *it != x)
            throw std::out_of_range("make_relation_on: pair at " + std::to_string(x) +
                                    " lies outside the declared support");
        return std::size_t(it - sup.begin());
    };
    for (const auto& [x, y] : pairs) {
        if (y >= codomain.size())
            throw std::out_of_range("make_relation_on: pair (" + std::to_string(x) + "," +
                                    std::to_string(y) + ") has codomain index out of range");
        rows[row_index(x)].insert(y);
    }
    for (std::size_t r = 0; r < sup.size(); ++r)
        if (rows[r].empty())
            throw std::invalid_argument("empty image at " + std::to_string(sup[r]));
    return SetValuedMap(domain, codomain, std::move(sup), std::move(rows));
}

// Validated total relation: every domain point must carry at least one pair.
inline SetValuedMap make_relation(const FiniteMetricSpace& domain,
                                  const FiniteMetricSpace& codomain,
                                  std::span<const IndexPair> pairs) {
    std::vector<std::size_t> all(domain.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return make_relation_on(domain, all, codomain, pairs);
}

inline SetValuedMap make_relation(const FiniteMetricSpace& domain,
                                  const FiniteMetricSpace& codomain,
                                  std::initializer_list<IndexPair> pairs) {
    return make_relation(domain, codomain, std::span<const IndexPair>(pairs.begin(), pairs.size()));
}

inline SetValuedMap make_relation_on(const FiniteMetricSpace& domain,
                                     std::initializer_list<std::size_t> support,
                                     const FiniteMetricSpace& codomain,
                                     std::initializer_list<IndexPair> pairs) {
    return make_relation_on(domain, std::span<const std::size_t>(support.begin(), support.size()),
                            codomain, std::span<const IndexPair>(pairs.begin(), pairs.size()));
}

inline SetValuedMap identity_relation(const FiniteMetricSpace& space) {
    std::vector<IndexPair> pairs;
    pairs.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) pairs.emplace_back(i, i);
    return make_relation(space, space, pairs);
}

inline SetValuedMap full_relation(const FiniteMetricSpace& space) {
    std::vector<std::size_t> all(space.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<PointSet> rows(space.size(), PointSet::full(space.size()));
    return SetValuedMap(space, space, std::move(all), std::move(rows));
}

// --- images and preimages ---------------------------------------------------

inline PointSet image_set(const SetValuedMap& F, std::size_t x) { return F.image(x); }

// Union of F(x) over x in S.
inline PointSet forward_image_set(const SetValuedMap& F, const PointSet& S) {
    if (S.empty())
        throw std::domain_error("forward_image_set: S must be nonempty");
    PointSet out(F.codomain().size());
    S.for_each([&](std::size_t x) { out.unite(F.image(x)); });
    return out;
}

// {x : F(x) meets C}.
inline PointSet lower_preimage(const SetValuedMap& F, const PointSet& C) {
    if (C.empty())
        throw std::domain_error("lower_preimage: C must be nonempty");
    PointSet out(F.domain().size());
    for (std::size_t x : F.support())
        if (F.image(x).intersects(C)) out.insert(x);
    return out;
}

// {x : F(x) contained in U}; empty U gives the empty set since images are
// nonempty.  Complements lower_preimage over the complement of U.
inline PointSet upper_inverse(const SetValuedMap& F, const PointSet& U) {
    PointSet out(F.domain().size());
    for (std::size_t x : F.support())
        if (F.image(x).is_subset_of(U)) out.insert(x);
    return out;
}

// Apply `first`, then `second`: (second o first)(x) = union of second(a) over
// a in first(x).  Totality survives: a union of nonempty sets over a nonempty
// index set is nonempty.
inline SetValuedMap compose(const SetValuedMap& first, const SetValuedMap& second) {
    if (first.codomain().size() != second.domain().size())
        throw std::invalid_argument("compose: codomain of the first map (size " +
                                    std::to_string(first.codomain().size()) +
                                    ") does not match the second map's domain (size " +
                                    std::to_string(second.domain().size()) + ")");
    std::vector<PointSet> rows;
    rows.reserve(first.support().size());
    for (std::size_t x : first.support()) {
        PointSet acc(second.codomain().size());
        bool bad = false;
        std::size_t bad_a = 0;
        first.image(x).for_each([&](std::size_t a) {
            if (!second.defined_at(a)) {
                bad = true;
                bad_a = a;
                return;
            }
            acc.unite(second.image(a));
        });
        if (bad)
            throw std::invalid_argument("compose: intermediate point " + std::to_string(bad_a) +
                                        " is outside the second map's domain of definition");
        rows.push_back(std::move(acc));
    }
    return SetValuedMap(first.domain(), second.codomain(),
                        std::vector<std::size_t>(first.support()), std::move(rows));
}

// Restriction to a nonempty subset of the domain of definition.
inline SetValuedMap restrict(const SetValuedMap& F, const ClosedSubset& A) {
    std::vector<PointSet> rows;
    rows.reserve(A.members.size());
    for (std::size_t x : A.members) {
        if (!F.defined_at(x))
            throw std::invalid_argument("restrict: point " + std::to_string(x) +
                                        " is outside the map's domain of definition");
        rows.push_back(F.image(x));
    }
    return SetValuedMap(F.domain(), F.codomain(), std::vector<std::size_t>(A.members),
                        std::move(rows));
}

// True iff the image sets of F and G coincide exactly at every point of A.
inline bool equal_on(const SetValuedMap& F, const SetValuedMap& G, const ClosedSubset& A) {
    if (F.codomain().size() != G.codomain().size())
        throw std::invalid_argument("equal_on: codomain size mismatch");
    for (std::size_t x : A.members) {
        if (!F.defined_at(x) || !G.defined_at(x))
            throw std::invalid_argument("equal_on: point " + std::to_string(x) +
                                        " is outside a map's domain of definition");
        if (!(F.image(x) == G.image(x))) return false;
    }
    return true;
}

// --- quantitative upper semicontinuity ------------------------------------

// On a finite discrete model usc is automatic; the exported meaning is the
// sampled-continuum surrogate: for all x, x' with d(x,x') <= delta,
// F(x') is contained in the closed eps-neighbourhood of F(x).
struct UscWitness {
    std::size_t x = 0;       // centre point
    std::size_t x_prime = 0; // nearby point whose image escapes
    std::size_t y = 0;       // offending member of F(x')
    double pair_distance = 0.0;
    double realized = 0.0;   // dist(y, F(x)); exceeds eps
};

struct UscCheckResult {
    bool holds = true;
    std::optional<UscWitness> witness;
};

struct UscCertificateRow {
    double delta = 0.0;
    double eps = 0.0;
    bool holds = false;
};

struct UscCertificate {
    const SetValuedMap* map = nullptr;
    std::vector<UscCertificateRow> rows;
};

namespace detail {

// reach[x*n + y] = dist(y, F(x)) over the codomain metric.
inline std::vector<double> image_distance_table(const SetValuedMap& F) {
    const std::size_t n = F.domain().size();
    const std::size_t m = F.codomain().size();
    std::vector<double> table(n * m, std::numeric_limits<double>::infinity());
    const auto& sup = F.support();
    parallel_for(0, sup.size(), [&](std::size_t r) {
        const std::size_t x = sup[r];
        for (std::size_t y = 0; y < m; ++y)
            table[x * m + y] = dist_to_set(F.codomain(), y, F.image(x));
    });
    return table;
}

inline UscCheckResult scan_usc(const SetValuedMap& F, const std::vector<double>& table,
                               double delta, double eps) {
    const std::size_t m = F.codomain().size();
    UscCheckResult result;
    for (std::size_t x : F.support()) {
        for (std::size_t xp : F.support()) {
            const double pd = F.domain().distance(x, xp);
            if (pd > delta) continue;
            F.image(xp).for_each([&](std::size_t y) {
                const double realized = table[x * m + y];
                if (realized > eps) {
                    result.holds = false;
                    if (!result.witness || realized > result.witness->realized)
                        result.witness = UscWitness{x, xp, y, pd, realized};
                }
            });
        }
    }
    return result;
}

} // namespace detail

// Exhaustive check of the (delta, eps) surrogate over all ordered support
// pairs; on failure reports the worst witness (largest realized escape).
inline UscCheckResult check_usc_modulus(const SetValuedMap& F, double delta, double eps) {
    if (delta < 0.0 || eps < 0.0)
        throw std::invalid_argument("check_usc_modulus: delta and eps must be >= 0");
    const std::vector<double> table = detail::image_distance_table(F);
    return detail::scan_usc(F, table, delta, eps);
}

// One row per (delta, eps) pair, each verified exhaustively; shares the
// distance table across the whole grid.
inline UscCertificate usc_certificate(const SetValuedMap& F, std::span<const double> deltas,
                                      std::span<const double> epsilons) {
    const std::vector<double> table = detail::image_distance_table(F);
    UscCertificate cert;
    cert.map = &F;
    for (double d : deltas)
        for (double e : epsilons) {
            if (d < 0.0 || e < 0.0)
                throw std::invalid_argument("usc_certificate: delta and eps must be >= 0");
            cert.rows.push_back({d, e, detail::scan_usc(F, table, d, e).holds});
        }
    return cert;
}

} // namespace relext
