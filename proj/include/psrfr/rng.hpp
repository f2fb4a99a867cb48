#pragma once

#include <array>
#include <cstdint>

namespace psrfr {

/// Addresses one reproducible random sequence. Equal (base_seed, stream_id)
/// always denote the same sequence; distinct stream_ids give statistically
/// independent sequences, so callers can split work (e.g. one stream per
/// Monte Carlo replicate) without coordination.
struct SeededStream {
  std::uint64_t base_seed = 0;
  std::uint64_t stream_id = 0;
};

/// One keyed block of the Philox4x32-10 counter-based generator
/// (Salmon, Moraes, Dror, Shaw 2011). Exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

/// Stateful reader of a SeededStream. Construction rewinds to the start of
/// the stream: two readers built from the same SeededStream emit identical
/// values regardless of what any other stream did (schedule independence).
///
/// All transforms are fixed by this implementation, not the C++ standard
/// library, so sequences are bit-identical across platforms: uniforms take
/// the top 53 bits of a Philox draw, normals use Box-Muller (pairs, one
/// cached), gammas use Marsaglia-Tsang with the power boost for shape < 1.
class RandomStream {
 public:
  explicit RandomStream(SeededStream s)
      : stream_(s.stream_id),
        key_{static_cast<std::uint32_t>(s.base_seed),
             static_cast<std::uint32_t>(s.base_seed >> 32)} {}

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  /// Uniform on (0, 1]; safe to pass to log().
  double uniform_pos();
  double uniform(double lo, double hi);

  /// Standard normal.
  double normal();

  /// Gamma(shape, scale), shape > 0, scale > 0. Mean = shape * scale.
  double gamma(double shape, double scale);

  /// Chi-square with dof > 0 degrees of freedom (= Gamma(dof/2, 2)).
  double chi_square(double dof);

 private:
  void refill();

  std::uint64_t counter_ = 0;
  std::uint64_t stream_ = 0;
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace psrfr
