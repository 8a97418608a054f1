#pragma once

#include <cstdint>
#include <string_view>

namespace gfdprop {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix2(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b * 0xD6E8FEB86659FD93ull));
}

inline std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace detail

/// Counter-based pseudorandom stream: the n-th draw is a pure function of
/// (key, n), so streams are deterministic, splittable by key, and never share
/// state. Sub-streams are derived by hashing a label into the key.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    CounterRng split(std::string_view label) const {
        return CounterRng(detail::mix2(key_, detail::hash_label(label)));
    }
    CounterRng split(std::uint64_t salt) const { return CounterRng(detail::mix2(key_, salt)); }

    std::uint64_t next_u64() { return detail::mix2(key_, counter_++); }

    /// uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    /// log-uniform over [a, b], a, b > 0
    double log_uniform(double a, double b) {
        return a * std::exp(next_double() * std::log(b / a));
    }

    /// integer in [lo, hi] inclusive
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool bernoulli(double prob) { return next_double() < prob; }

    double sign() { return bernoulli(0.5) ? 1.0 : -1.0; }

    template <typename T, std::size_t N>
    T pick(const T (&arr)[N]) {
        return arr[next_u64() % N];
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace gfdprop
