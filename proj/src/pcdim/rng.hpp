#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pcdim {

// Counter-based generator (Philox4x32, 10 rounds). Every draw is a pure
// function of (seed, replicate, stream tag, draw index), so replicates can
// run on any thread in any order and still reproduce bit-identically.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    if (round < 9) {
      key[0] += kW0;
      key[1] += kW1;
    }
  }
  return ctr;
}

// Named sub-streams so independent uses of one replicate never collide.
enum class StreamTag : std::uint32_t {
  Scores = 1,
  ScoresAux = 2,
  Rotation = 3,
  Generic = 7,
};

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint32_t replicate, StreamTag tag)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        replicate_(replicate),
        tag_(static_cast<std::uint32_t>(tag)) {}

  // Two doubles in (0,1) from one block.
  void uniform_pair(std::uint64_t draw, double& u1, double& u2) const {
    const auto x = philox4x32({static_cast<std::uint32_t>(draw),
                               static_cast<std::uint32_t>(draw >> 32), replicate_, tag_},
                              key_);
    u1 = to_unit(static_cast<std::uint64_t>(x[0]) | (static_cast<std::uint64_t>(x[1]) << 32));
    u2 = to_unit(static_cast<std::uint64_t>(x[2]) | (static_cast<std::uint64_t>(x[3]) << 32));
  }

  // Box-Muller from block `draw`; cosine branch.
  double normal(std::uint64_t draw) const {
    double c, s;
    normal_pair(draw, c, s);
    return c;
  }

  void normal_pair(std::uint64_t draw, double& cos_z, double& sin_z) const {
    double u1, u2;
    uniform_pair(draw, u1, u2);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cos_z = r * std::cos(a);
    sin_z = r * std::sin(a);
  }

  // Unit-variance scaled t with 3 degrees of freedom; consumes blocks
  // 2*idx and 2*idx+1.
  double scaled_t3(std::uint64_t idx) const {
    double z0, z1, z2, z3;
    normal_pair(2 * idx, z0, z1);
    normal_pair(2 * idx + 1, z2, z3);
    return z0 / std::sqrt(z1 * z1 + z2 * z2 + z3 * z3);
  }

 private:
  static double to_unit(std::uint64_t u) {
    return (static_cast<double>(u >> 11) + 0.5) * 0x1p-53;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t replicate_;
  std::uint32_t tag_;
};

}  // namespace pcdim
