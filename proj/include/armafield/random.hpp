#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace armafield {

/// Identifier recorded next to synthesized outputs so that a re-run can
/// reproduce the exact noise stream.
inline constexpr std::string_view kRandomAlgorithm = "mt19937_64/seed_seq(lo,hi,stream)/box-muller";

/// Deterministic, platform-independent random stream. Substreams are derived
/// from (seed, stream) so independent consumers never share state.
///
/// std::normal_distribution and std::uniform_real_distribution are not
/// specified bit-for-bit across standard libraries, so the conversions from
/// raw 64-bit words are done here.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);
    /// Standard normal via Box-Muller (both outputs used).
    double gaussian();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace armafield
