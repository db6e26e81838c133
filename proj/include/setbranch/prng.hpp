#ifndef SETBRANCH_PRNG_HPP
#define SETBRANCH_PRNG_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace setbranch {

// Seeded generator used by every instance generator.
//
// Algorithm: xorshift64* (Vigna, "An experimental exploration of Marsaglia's
// xorshift generators, scrambled", 2016), shift triple (12, 25, 27) and
// output multiplier 0x2545F4914F6CDD1D.
//
// Seeding: the 64-bit user seed is passed once through the splitmix64
// finalizer (increment 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and
// 0x94D049BB133111EB, shifts 30/27/31). A zero result is replaced by
// 0x9E3779B97F4A7C15 because xorshift has an all-zero fixed point.
//
// bounded(n) uses rejection sampling: draws r until r >= (2^64 - n) mod n,
// then returns r mod n. shuffle() is Fisher-Yates running from the last
// element down, swapping i with bounded(i + 1).
class XorShift64Star {
public:
    explicit XorShift64Star(std::uint64_t seed) : state_(splitmix(seed)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    // Uniform in [0, n). n must be positive.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(bounded(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    // First k entries of a partial Fisher-Yates pass over 0..n-1, i.e. k
    // distinct indices drawn uniformly without replacement, in draw order.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::size_t>(bounded(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

    std::uint64_t state() const { return state_; }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
};

}  // namespace setbranch

#endif
