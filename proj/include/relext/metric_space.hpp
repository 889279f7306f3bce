// Finite metric spaces with a dense distance matrix.  A space produced by one
// of the samplers below is an epsilon-net standing in for the continuum it was
// sampled from; every subset of a finite space is closed.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relext/parallel.hpp"
#include "relext/point_set.hpp"

namespace relext {

class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist_row_major)
        : labels_(std::move(labels)), dist_(std::move(dist_row_major)), n_(labels_.size()) {
        if (n_ == 0)
            throw std::invalid_argument("FiniteMetricSpace: at least one point required");
        if (dist_.size() != n_ * n_)
            throw std::invalid_argument("FiniteMetricSpace: distance matrix is not " +
                                        std::to_string(n_) + "x" + std::to_string(n_));
    }

    FiniteMetricSpace(std::vector<std::string> labels,
                      const std::vector<std::vector<double>>& dist)
        : FiniteMetricSpace(std::move(labels), flatten(dist)) {}

    std::size_t size() const { return n_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<double>& matrix() const { return dist_; }

    double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

    // True when every entry is an exact integer; validation and argmin
    // tolerances are then exact instead of relative.
    bool integer_valued() const {
        for (double d : dist_)
            if (d != std::nearbyint(d)) return false;
        return true;
    }

    double diameter() const {
        double m = 0.0;
        for (double d : dist_) m = std::max(m, d);
        return m;
    }

private:
    static std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
        std::vector<double> flat;
        const std::size_t n = rows.size();
        flat.reserve(n * n);
        for (const auto& row : rows) {
            if (row.size() != n)
                throw std::invalid_argument("FiniteMetricSpace: distance matrix is not square");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return flat;
    }

    std::vector<std::string> labels_;
    std::vector<double> dist_;
    std::size_t n_;
};

// A nonempty index set A of a space.  Finite spaces are discrete, so every
// subset is closed; the type records intent rather than extra structure.
struct ClosedSubset {
    const FiniteMetricSpace* space = nullptr;
    std::vector<std::size_t> members; // sorted, unique, nonempty

    PointSet as_point_set() const { return PointSet::of(space->size(), members); }
    bool contains(std::size_t x) const {
        return std::binary_search(members.begin(), members.end(), x);
    }
};

inline ClosedSubset make_subset(const FiniteMetricSpace& space,
                                std::span<const std::size_t> indices) {
    if (indices.empty())
        throw std::invalid_argument("make_subset: a closed subset must be nonempty");
    std::vector<std::size_t> members(indices.begin(), indices.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.back() >= space.size())
        throw std::out_of_range("make_subset: member " + std::to_string(members.back()) +
                                " outside space of size " + std::to_string(space.size()));
    return ClosedSubset{&space, std::move(members)};
}

inline ClosedSubset make_subset(const FiniteMetricSpace& space,
                                std::initializer_list<std::size_t> indices) {
    return make_subset(space, std::span<const std::size_t>(indices.begin(), indices.size()));
}

// --- metric axiom validation -------------------------------------------------

enum class MetricAxiom {
    NonNegativity,
    ZeroDiagonal,
    Separation,   // dist[i][j] == 0 for i != j
    Symmetry,
    Triangle,
};

struct MetricViolation {
    MetricAxiom axiom;
    std::size_t i = 0, j = 0, k = 0; // k only meaningful for Triangle
    double lhs = 0.0, rhs = 0.0;

    std::string describe() const {
        char buf[160];
        switch (axiom) {
        case MetricAxiom::NonNegativity:
            std::snprintf(buf, sizeof buf, "dist[%zu][%zu] = %g is negative", i, j, lhs);
            break;
        case MetricAxiom::ZeroDiagonal:
            std::snprintf(buf, sizeof buf, "dist[%zu][%zu] = %g, diagonal must be 0", i, i, lhs);
            break;
        case MetricAxiom::Separation:
            std::snprintf(buf, sizeof buf, "dist[%zu][%zu] = 0 for distinct points", i, j);
            break;
        case MetricAxiom::Symmetry:
            std::snprintf(buf, sizeof buf, "dist[%zu][%zu] = %g != dist[%zu][%zu] = %g",
                          i, j, lhs, j, i, rhs);
            break;
        case MetricAxiom::Triangle:
            std::snprintf(buf, sizeof buf,
                          "triangle violated at (%zu,%zu,%zu): %g > %g", i, j, k, lhs, rhs);
            break;
        }
        return buf;
    }
};

struct ValidationReport {
    std::vector<MetricViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Lists every axiom violation; the report is empty iff the matrix is a metric.
// Triangle comparisons are exact for integer-valued matrices and use a
// relative 1e-9 slack otherwise (sampled continua carry irrational entries).
inline ValidationReport validate_metric(const FiniteMetricSpace& M) {
    const std::size_t n = M.size();
    const bool exact = M.integer_valued();
    ValidationReport report;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = M.distance(i, j);
            if (d < 0.0)
                report.violations.push_back({MetricAxiom::NonNegativity, i, j, 0, d, 0.0});
            if (i == j && d != 0.0)
                report.violations.push_back({MetricAxiom::ZeroDiagonal, i, j, 0, d, 0.0});
            if (i != j && d == 0.0)
                report.violations.push_back({MetricAxiom::Separation, i, j, 0, d, 0.0});
            if (j > i && M.distance(i, j) != M.distance(j, i))
                report.violations.push_back(
                    {MetricAxiom::Symmetry, i, j, 0, M.distance(i, j), M.distance(j, i)});
        }
    }

    std::vector<std::vector<MetricViolation>> per_i(n);
    parallel_for(0, n, [&](std::size_t i) {
        auto& sink = per_i[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double dij = M.distance(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                const double via = M.distance(i, k) + M.distance(k, j);
                const double slack = exact ? 0.0 : 1e-9 * (dij + via);
                if (dij > via + slack)
                    sink.push_back({MetricAxiom::Triangle, i, j, k, dij, via});
            }
        }
    });
    for (auto& sink : per_i)
        report.violations.insert(report.violations.end(), sink.begin(), sink.end());
    return report;
}

// --- distances to sets ---------------------------------------------------

// min over a in A of d(x, a); on a finite subset the minimum is attained.
inline double dist_to_set(const FiniteMetricSpace& M, std::size_t x,
                          std::span<const std::size_t> A) {
    if (A.empty())
        throw std::domain_error("dist_to_set: the target set must be nonempty");
    if (x >= M.size())
        throw std::out_of_range("dist_to_set: point " + std::to_string(x) + " out of range");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a : A) best = std::min(best, M.distance(x, a));
    return best;
}

inline double dist_to_set(const FiniteMetricSpace& M, std::size_t x, const ClosedSubset& A) {
    return dist_to_set(M, x, std::span<const std::size_t>(A.members));
}

inline double dist_to_set(const FiniteMetricSpace& M, std::size_t x, const PointSet& A) {
    if (A.empty())
        throw std::domain_error("dist_to_set: the target set must be nonempty");
    double best = std::numeric_limits<double>::infinity();
    A.for_each([&](std::size_t a) { best = std::min(best, M.distance(x, a)); });
    return best;
}

// max of the two directed sup-of-dist-to-set quantities; metrizes the
// nonempty subsets of M.
inline double hausdorff_distance(const FiniteMetricSpace& M, const PointSet& S,
                                 const PointSet& T) {
    if (S.empty() || T.empty())
        throw std::domain_error("hausdorff_distance: both sets must be nonempty");
    double h = 0.0;
    S.for_each([&](std::size_t s) { h = std::max(h, dist_to_set(M, s, T)); });
    T.for_each([&](std::size_t t) { h = std::max(h, dist_to_set(M, t, S)); });
    return h;
}

// --- samplers -----------------------------------------------------------

namespace detail {
inline std::string indexed_label(const char* stem, std::size_t i) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%zu", stem, i);
    return buf;
}
} // namespace detail

// n evenly spaced points of [a, b] with the line metric.
inline FiniteMetricSpace sample_interval(double a, double b, std::size_t n) {
    if (n < 1) throw std::invalid_argument("sample_interval: need n >= 1");
    if (n > 1 && !(a < b))
        throw std::invalid_argument("sample_interval: need a < b for n >= 2");
    std::vector<double> coord(n);
    for (std::size_t i = 0; i < n; ++i)
        coord[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    std::vector<std::string> labels(n);
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = detail::indexed_label("x", i);
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::fabs(coord[i] - coord[j]);
    }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

// n equally spaced points of the unit circle with the arc-length metric
// d(i, j) = min(|i-j|, n-|i-j|) * 2*pi/n.
inline FiniteMetricSpace sample_circle(std::size_t n) {
    if (n < 3) throw std::invalid_argument("sample_circle: need n >= 3");
    const double step = 2.0 * std::numbers::pi / double(n);
    std::vector<std::string> labels(n);
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = detail::indexed_label("c", i);
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t gap = i > j ? i - j : j - i;
            gap = std::min(gap, n - gap);
            dist[i * n + j] = double(gap) * step;
        }
    }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

// Product of two sampled circles under the max-metric; preserves the exact
// circle distances and keeps tie structure simple.
inline FiniteMetricSpace sample_torus(std::size_t n, std::size_t m) {
    if (n < 3 || m < 3) throw std::invalid_argument("sample_torus: need n, m >= 3");
    FiniteMetricSpace cu = sample_circle(n);
    FiniteMetricSpace cv = sample_circle(m);
    const std::size_t N = n * m;
    std::vector<std::string> labels(N);
    std::vector<double> dist(N * N);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "t%zu_%zu", i, j);
            labels[i * m + j] = buf;
        }
    for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = 0; q < N; ++q) {
            const std::size_t pi = p / m, pj = p % m, qi = q / m, qj = q % m;
            dist[p * N + q] = std::max(cu.distance(pi, qi), cv.distance(pj, qj));
        }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

// Sampled [a, b] together with one isolated point, all under the line metric.
// sample_interval_with_outlier(0, 1, 11, 2) models [0,1] united with {2}.
inline FiniteMetricSpace sample_interval_with_outlier(double a, double b, std::size_t n,
                                                      double outlier) {
    if (!(outlier > b))
        throw std::invalid_argument("sample_interval_with_outlier: outlier must lie beyond b");
    if (n < 1) throw std::invalid_argument("sample_interval_with_outlier: need n >= 1");
    if (n > 1 && !(a < b))
        throw std::invalid_argument("sample_interval_with_outlier: need a < b for n >= 2");
    const std::size_t N = n + 1;
    std::vector<double> coord(N);
    std::vector<std::string> labels(N);
    for (std::size_t i = 0; i < n; ++i) {
        coord[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
        labels[i] = detail::indexed_label("x", i);
    }
    coord[n] = outlier;
    labels[n] = "out";
    std::vector<double> dist(N * N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) dist[i * N + j] = std::fabs(coord[i] - coord[j]);
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

// --- connectivity at a scale ---------------------------------------------

// Connected components of the graph {i ~ j : d(i,j) <= gap}, each sorted,
// listed by smallest member.  At gap 0 only exact duplicates merge; at the
// diameter everything does.
inline std::vector<std::vector<std::size_t>> components_at_gap(const FiniteMetricSpace& M,
                                                               double gap) {
    if (gap < 0.0) throw std::invalid_argument("components_at_gap: gap must be >= 0");
    const std::size_t n = M.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (M.distance(i, j) <= gap) parent[find(i)] = find(j);

    std::vector<std::vector<std::size_t>> buckets(n);
    for (std::size_t i = 0; i < n; ++i) buckets[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> components;
    for (auto& b : buckets)
        if (!b.empty()) components.push_back(std::move(b));
    std::sort(components.begin(), components.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return components;
}

} // namespace relext
