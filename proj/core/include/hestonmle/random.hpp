#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace hestonmle {

/// Philox4x32-10 counter-based generator.
/// The 64-bit key is the user seed; the upper half of the 128-bit counter is the
/// stream id, so every (seed, stream_id) pair owns an independent sequence that
/// does not depend on how work is scheduled across threads.
class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream_id) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == 2) {
            buffer_ = generate(counter_block(block_++), key_);
            pos_ = 0;
        }
        const std::size_t i = 2 * pos_++;
        return (static_cast<std::uint64_t>(buffer_[i + 1]) << 32) | buffer_[i];
    }

    void discard(unsigned long long n) noexcept {
        while (n > 0 && pos_ != 2) {
            (*this)();
            --n;
        }
        block_ += n / 2;
        if (n % 2 != 0) (*this)();
    }

    /// One keyed bijection of a 128-bit counter (exposed for known-answer tests).
    static Block generate(Block ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    Block counter_block(std::uint64_t block) const noexcept {
        return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    }

    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    std::size_t pos_ = 2;
};

/// Variate source for one trajectory: a Philox stream plus the standard
/// distributions drawn from it.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id) : engine_(seed, stream_id) {}

    double normal() { return normal_(engine_); }

    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    /// Gamma(shape, scale).
    double gamma(double shape, double scale) {
        return std::gamma_distribution<double>(shape, scale)(engine_);
    }

    double chi_square(double dof) { return gamma(0.5 * dof, 2.0); }

    /// Noncentral chi-square with dof > 1:  chi2(dof - 1) + (Z + sqrt(nc))^2.
    double noncentral_chi_square(double dof, double noncentrality) {
        const double central = chi_square(dof - 1.0);
        const double shifted = normal() + std::sqrt(noncentrality);
        return central + shifted * shifted;
    }

    Philox4x32& engine() noexcept { return engine_; }

private:
    Philox4x32 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hestonmle
