#pragma once

#include <cmath>
#include <cstdint>

namespace noncausal {
namespace rng {

// Counter-based generator (Philox 4x32, 10 rounds). A draw stream is fully
// identified by (seed, label, index): the seed forms the key, the label and
// index sit in the counter block. Streams can therefore be evaluated in any
// order, or in parallel batches, and still produce bit-identical output for
// a given seed.

struct Block {
    std::uint32_t v[4];
};

inline Block philox4x32(std::uint32_t k0, std::uint32_t k1, Block ctr) {
    constexpr std::uint32_t M0 = 0xD2511F53u;
    constexpr std::uint32_t M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u;
    constexpr std::uint32_t W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr.v[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr.v[2];
        Block next;
        next.v[0] = static_cast<std::uint32_t>(p1 >> 32) ^ ctr.v[1] ^ k0;
        next.v[1] = static_cast<std::uint32_t>(p1);
        next.v[2] = static_cast<std::uint32_t>(p0 >> 32) ^ ctr.v[3] ^ k1;
        next.v[3] = static_cast<std::uint32_t>(p0);
        ctr = next;
        k0 += W0;
        k1 += W1;
    }
    return ctr;
}

// FNV-1a, used to turn short stream names into counter labels.
constexpr std::uint32_t stream_label(const char* s) {
    std::uint32_t h = 2166136261u;
    for (; *s; ++s) {
        h ^= static_cast<std::uint32_t>(*s);
        h *= 16777619u;
    }
    return h;
}

class Substream {
public:
    Substream(std::uint64_t seed, std::uint32_t label, std::uint64_t index)
        : k0_(static_cast<std::uint32_t>(seed)),
          k1_(static_cast<std::uint32_t>(seed >> 32)),
          base_{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), label,
                0u},
          block_(0),
          pos_(4),
          have_normal_(false),
          cached_normal_(0.0) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            Block ctr = base_;
            ctr.v[3] = block_++;
            out_ = philox4x32(k0_, k1_, ctr);
            pos_ = 0;
        }
        return out_.v[pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform strictly inside (0,1); safe under log().
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        cached_normal_ = radius * std::sin(angle);
        have_normal_ = true;
        return radius * std::cos(angle);
    }

    // Unit-scale gamma draw, Marsaglia-Tsang squeeze for shape >= 1 with the
    // usual boost for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double g = gamma(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = uniform();
            double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

    double student_t(double dof) {
        double z = normal();
        double w = chi_squared(dof);
        return z * std::sqrt(dof / w);
    }

private:
    std::uint32_t k0_, k1_;
    Block base_;
    std::uint32_t block_;
    Block out_{};
    int pos_;
    bool have_normal_;
    double cached_normal_;
};

}  // namespace rng
}  // namespace noncausal
