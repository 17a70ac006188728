#pragma once

#include <array>
#include <cstdint>

namespace mfa {

// Philox4x32-10 counter-based generator. The key is the 64-bit seed, the
// upper half of the 128-bit counter is the stream id, the lower half counts
// blocks, so (seed, stream) pairs give independent reproducible streams.
class Philox {
public:
    using Block = std::array<std::uint32_t, 4>;

    Philox(std::uint64_t seed, std::uint64_t stream);

    static Block philox4x32_10(Block counter, std::array<std::uint32_t, 2> key);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    double uniform();  // in (0, 1)
    double normal();
    double exponential();
    std::uint64_t poisson(double lambda);

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mfa
