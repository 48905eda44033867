#include "gbnn/snapshot.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace gbnn {
namespace {

constexpr std::array<char, 4> kMagic = {'G', 'B', 'N', 'N'};

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw std::runtime_error("snapshot truncated");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_snapshot(const Network& net, std::ostream& out) {
  const auto& shape = net.shape();
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(shape.chi()));
  put_u32(out, static_cast<std::uint32_t>(shape.ell()));
  const std::size_t n = shape.fanal_count();
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t bits = n - r - 1;
    for (std::size_t w = 0; w < words_for_bits(bits); ++w) {
      std::uint64_t word = 0;
      for (std::size_t k = 0; k < 64 && w * 64 + k < bits; ++k)
        if (net.connected(r, r + 1 + w * 64 + k)) word |= std::uint64_t{1} << k;
      put_u64(out, word);
    }
  }
  if (!out) throw std::runtime_error("snapshot write failed");
}

void write_snapshot(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_snapshot(net, out);
}

Network read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw std::runtime_error("not a GBNN snapshot");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  const auto chi = get_le<std::uint32_t>(in);
  const auto ell = get_le<std::uint32_t>(in);
  const NetworkShape shape = [&] {
    try {
      return NetworkShape(chi, ell);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("invalid snapshot header: ") + e.what());
    }
  }();
  const std::size_t n = shape.fanal_count();
  WeightMatrix weights(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t bits = n - r - 1;
    for (std::size_t w = 0; w < words_for_bits(bits); ++w) {
      std::uint64_t word = get_le<std::uint64_t>(in);
      while (word) {
        const std::size_t k = static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        if (w * 64 + k >= bits) throw std::runtime_error("snapshot has padding bits set");
        weights.connect(r, r + 1 + w * 64 + k);
      }
    }
  }
  try {
    return Network(shape, std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid snapshot: ") + e.what());
  }
}

Network read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_snapshot(in);
}

}  // namespace gbnn
