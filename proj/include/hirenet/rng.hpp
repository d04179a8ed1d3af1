#pragma once

#include <bit>
#include <cstdint>

// Counter-based random streams. Every draw is a pure function of a 64-bit
// stream key and a counter, so simulations are reproducible no matter how
// trials are scheduled across threads, and two runs that derive the same
// key see the same numbers.

namespace hirenet::rng {

// splitmix64 output function (Steele, Lea, Flood 2014). Bijective on u64.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t value) {
    return mix64(key ^ mix64(value));
}

constexpr std::uint64_t key_from_double(double v) {
    return std::bit_cast<std::uint64_t>(v);
}

// Uniform in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// A keyed stream: value at counter c is mix(key, c). Copyable, stateless.
class Stream {
public:
    explicit constexpr Stream(std::uint64_t key) : key_(key) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const {
        return combine(key_, counter);
    }

    constexpr double uniform(std::uint64_t counter) const {
        return to_unit(bits(counter));
    }

    // Uniform integer in [0, n). Uses the high-multiply trick; the bias of
    // O(n / 2^64) is far below anything resolvable by Monte Carlo here.
    constexpr std::uint64_t below(std::uint64_t counter, std::uint64_t n) const {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((u128(bits(counter)) * u128(n)) >> 64);
    }

    constexpr Stream derive(std::uint64_t salt) const {
        return Stream(combine(key_, salt));
    }

    constexpr std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

// Sequential facade over a Stream for code that draws in order
// (shuffles, local-search proposals).
class Sequence {
public:
    explicit constexpr Sequence(Stream s) : stream_(s) {}
    explicit constexpr Sequence(std::uint64_t key) : stream_(key) {}

    double next_uniform() { return stream_.uniform(counter_++); }
    std::uint64_t next_bits() { return stream_.bits(counter_++); }
    std::uint64_t next_below(std::uint64_t n) { return stream_.below(counter_++, n); }

private:
    Stream stream_;
    std::uint64_t counter_ = 0;
};

// Fisher-Yates shuffle driven by a Sequence.
template <typename Container>
void shuffle(Container& items, Sequence& seq) {
    const std::size_t n = items.size();
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(seq.next_below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

} // namespace hirenet::rng
