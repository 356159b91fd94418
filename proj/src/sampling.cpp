#include "screenlab/sampling.hpp"

namespace screenlab {

namespace {

std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x5c5eu};
  return std::mt19937_64(seq);
}

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SeededStream::SeededStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(keyed_engine(master_seed, stream_index)) {}

double SeededStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t SeededStream::below(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

SeededStream SeededStream::child(std::uint64_t tag) const {
  return SeededStream(mix(master_seed_ ^ mix(stream_index_)), mix(tag));
}

SeededStream spawn_rep_stream(std::uint64_t master_seed, std::uint64_t rep) {
  return SeededStream(master_seed, rep);
}

DesignMatrix sample_uniform_design(std::size_t n, std::size_t p, SeededStream& stream) {
  if (n < 2 || p < 1) {
    throw InvalidShape("sample_uniform_design needs n >= 2 and p >= 1, got n=" +
                       std::to_string(n) + ", p=" + std::to_string(p));
  }
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = stream.uniform();
  return DesignMatrix(std::move(x));
}

}  // namespace screenlab
