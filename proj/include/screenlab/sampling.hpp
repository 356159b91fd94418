#pragma once

#include <cstdint>
#include <random>

#include "screenlab/core.hpp"

namespace screenlab {

/// Random stream keyed by (master_seed, stream_index).
///
/// The engine state is derived only from the key, so equal keys replay
/// bit-identical sequences and parallel repetitions never share state.
/// Copying a stream copies its position.
class SeededStream {
 public:
  SeededStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Uniform on [0, 1); 53 random bits, never returns 1.0.
  double uniform();
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  /// Independent child stream; depends only on this stream's key and `tag`.
  SeededStream child(std::uint64_t tag) const;

  std::mt19937_64& engine() { return engine_; }

  friend bool operator==(const SeededStream& a, const SeededStream& b) {
    return a.master_seed_ == b.master_seed_ && a.stream_index_ == b.stream_index_ &&
           a.engine_ == b.engine_;
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

/// Stream for repetition `rep` of an experiment seeded with `master_seed`.
SeededStream spawn_rep_stream(std::uint64_t master_seed, std::uint64_t rep);

/// n x p design with i.i.d. Uniform[0, 1) entries, filled row by row.
DesignMatrix sample_uniform_design(std::size_t n, std::size_t p, SeededStream& stream);

}  // namespace screenlab
