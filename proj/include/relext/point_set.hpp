// Word-parallel set of point indices over a fixed finite universe.
// Images of set-valued maps, preimages and neighbourhoods are all PointSets,
// so membership, union and subset tests run one machine word at a time.
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace relext {

class PointSet {
public:
    PointSet() = default;

    explicit PointSet(std::size_t universe)
        : universe_(universe), words_((universe + 63) / 64, 0u) {}

    static PointSet full(std::size_t universe) {
        PointSet s(universe);
        for (std::size_t i = 0; i < universe; ++i) s.insert(i);
        return s;
    }

    static PointSet of(std::size_t universe, std::span<const std::size_t> indices) {
        PointSet s(universe);
        for (std::size_t i : indices) s.insert(i);
        return s;
    }

    static PointSet of(std::size_t universe, std::initializer_list<std::size_t> indices) {
        return of(universe, std::span<const std::size_t>(indices.begin(), indices.size()));
    }

    std::size_t universe_size() const { return universe_; }

    bool contains(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void insert(std::size_t i) {
        if (i >= universe_)
            throw std::out_of_range("PointSet: index " + std::to_string(i) +
                                    " outside universe of size " + std::to_string(universe_));
        words_[i >> 6] |= std::uint64_t(1) << (i & 63);
    }

    void erase(std::size_t i) {
        if (i >= universe_) return;
        words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
    }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += std::size_t(std::popcount(w));
        return c;
    }

    bool intersects(const PointSet& other) const {
        check_same_universe(other);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & other.words_[k]) return true;
        return false;
    }

    bool is_subset_of(const PointSet& other) const {
        check_same_universe(other);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~other.words_[k]) return false;
        return true;
    }

    PointSet& unite(const PointSet& other) {
        check_same_universe(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
        return *this;
    }

    PointSet& intersect(const PointSet& other) {
        check_same_universe(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
        return *this;
    }

    PointSet& subtract(const PointSet& other) {
        check_same_universe(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
        return *this;
    }

    PointSet complement() const {
        PointSet s(universe_);
        for (std::size_t k = 0; k < words_.size(); ++k) s.words_[k] = ~words_[k];
        s.trim();
        return s;
    }

    // Lowest member; universe_size() when empty.
    std::size_t lowest() const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k]) return k * 64 + std::size_t(std::countr_zero(words_[k]));
        return universe_;
    }

    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                std::size_t bit = std::size_t(std::countr_zero(w));
                fn(k * 64 + bit);
                w &= w - 1;
            }
        }
    }

    friend bool operator==(const PointSet& a, const PointSet& b) {
        return a.universe_ == b.universe_ && a.words_ == b.words_;
    }

    friend PointSet operator|(PointSet a, const PointSet& b) { return a.unite(b); }
    friend PointSet operator&(PointSet a, const PointSet& b) { return a.intersect(b); }

private:
    void check_same_universe(const PointSet& other) const {
        if (universe_ != other.universe_)
            throw std::invalid_argument("PointSet: universe mismatch (" +
                                        std::to_string(universe_) + " vs " +
                                        std::to_string(other.universe_) + ")");
    }

    void trim() {
        if (universe_ & 63) {
            std::uint64_t mask = (std::uint64_t(1) << (universe_ & 63)) - 1;
            if (!words_.empty()) words_.back() &= mask;
        }
    }

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace relext
