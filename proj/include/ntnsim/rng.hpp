#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace ntnsim {

/// splitmix64 finalizer; used both as the stream generator and to derive keys.
constexpr std::uint64_t
mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream key from a seed and a tuple of identifiers.
/// Draws are a pure function of (seed, ids), independent of call order.
inline std::uint64_t
stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> ids)
{
    std::uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ULL);
    for (auto id : ids)
    {
        k = mix64(k ^ (id + 0x9e3779b97f4a7c15ULL + (k << 6) + (k >> 2)));
    }
    return k;
}

/// Small counter-based stream (splitmix64). Cheap to construct per link and
/// slot, so every channel draw can own its stream.
class RngStream
{
  public:
    explicit RngStream(std::uint64_t key)
        : m_state(key)
    {
    }

    std::uint64_t next_u64()
    {
        m_state += 0x9e3779b97f4a7c15ULL;
        return mix64(m_state);
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal (Box-Muller, second variate cached).
    double normal()
    {
        if (m_hasSpare)
        {
            m_hasSpare = false;
            return m_spare;
        }
        double u1 = 0.0;
        do
        {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        m_spare = r * std::sin(a);
        m_hasSpare = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t m_state;
    double m_spare = 0.0;
    bool m_hasSpare = false;
};

/// Stream tags, so that different kinds of draws never share a key.
enum class StreamTag : std::uint64_t
{
    UeDrop = 1,
    Shadowing = 2,
    FastFading = 3,
    Harq = 4,
};

inline RngStream
make_stream(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> ids = {})
{
    std::uint64_t k = stream_key(seed, {static_cast<std::uint64_t>(tag)});
    for (auto id : ids)
    {
        k = mix64(k ^ (id + 0x9e3779b97f4a7c15ULL + (k << 6) + (k >> 2)));
    }
    return RngStream(k);
}

} // namespace ntnsim
