#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cadec {

// Fixed-length bit vector packed into 64-bit words, bit j at word j/64,
// position j%64. Unused bits of the last word are always zero; every
// mutating operation restores that invariant.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static BitVec ones(std::size_t n) {
        BitVec v(n);
        for (auto& w : v.w_) w = ~std::uint64_t{0};
        v.mask_tail();
        return v;
    }

    // Parses "0110…"; character k becomes bit k.
    static BitVec from_string(std::string_view s) {
        BitVec v(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) {
            assert(s[j] == '0' || s[j] == '1');
            if (s[j] == '1') v.set(j, true);
        }
        return v;
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t j) const {
        assert(j < n_);
        return (w_[j >> 6] >> (j & 63)) & 1u;
    }

    void set(std::size_t j, bool v) {
        assert(j < n_);
        const std::uint64_t m = std::uint64_t{1} << (j & 63);
        if (v)
            w_[j >> 6] |= m;
        else
            w_[j >> 6] &= ~m;
    }

    void flip(std::size_t j) {
        assert(j < n_);
        w_[j >> 6] ^= std::uint64_t{1} << (j & 63);
    }

    void clear() {
        for (auto& w : w_) w = 0;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool none() const {
        for (auto w : w_)
            if (w != 0) return false;
        return true;
    }

    bool all() const { return count() == n_; }

    BitVec complement() const {
        BitVec v(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) v.w_[i] = ~w_[i];
        v.mask_tail();
        return v;
    }

    BitVec& operator^=(const BitVec& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }

    BitVec& operator&=(const BitVec& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }

    BitVec& operator|=(const BitVec& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }

    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
    friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
    friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }

    bool operator==(const BitVec&) const = default;

    // True when this vector is bitwise contained in o (this ⊆ o).
    bool subset_of(const BitVec& o) const {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t j = 0; j < n_; ++j)
            if (get(j)) s[j] = '1';
        return s;
    }

    std::size_t word_count() const { return w_.size(); }

    std::uint64_t word(std::size_t i) const {
        assert(i < w_.size());
        return w_[i];
    }

    // Stores a whole word; the tail word is re-masked.
    void set_word(std::size_t i, std::uint64_t v) {
        assert(i < w_.size());
        w_[i] = v;
        if (i + 1 == w_.size()) mask_tail();
    }

    const std::uint64_t* words() const { return w_.data(); }
    std::uint64_t* words() { return w_.data(); }

    void mask_tail() {
        if (n_ & 63) w_.back() &= (~std::uint64_t{0}) >> (64 - (n_ & 63));
    }

    std::size_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ull ^ n_;
        for (auto w : w_) {
            h ^= w;
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace cadec
