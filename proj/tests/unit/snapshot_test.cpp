#include <gtest/gtest.h>

#include <sstream>

#include "gbnn/snapshot.hpp"
#include "test_util.hpp"

using namespace gbnn;

namespace {

std::string to_bytes(const Network& net) {
  std::ostringstream out(std::ios::binary);
  write_snapshot(net, out);
  return out.str();
}

Network from_bytes(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_snapshot(in);
}

}  // namespace

TEST(Snapshot, HeaderLayout) {
  Network net(NetworkShape(3, 2));
  const auto bytes = to_bytes(net);
  ASSERT_GE(bytes.size(), 16U);
  EXPECT_EQ(bytes.substr(0, 4), "GBNN");
  EXPECT_EQ(bytes.substr(4, 4), std::string("\x01\x00\x00\x00", 4));
  EXPECT_EQ(bytes.substr(8, 4), std::string("\x03\x00\x00\x00", 4));
  EXPECT_EQ(bytes.substr(12, 4), std::string("\x02\x00\x00\x00", 4));
  // Rows 0..4 carry 5,4,3,2,1 bits, one word each; row 5 carries none.
  EXPECT_EQ(bytes.size(), 16U + 5 * 8);
}

TEST(Snapshot, UpperTriangleBitsAreLsbFirst) {
  Network net(NetworkShape(3, 2));
  net.store(Message{1, 0, 2});  // fanals 0 and 5
  net.store(Message{0, 2, 1});  // fanals 3 and 4
  const auto bytes = to_bytes(net);
  // Row 0 covers columns 1..5, so column 5 is bit 4.
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 0x10);
  // Row 3 covers columns 4..5, so column 4 is bit 0.
  EXPECT_EQ(static_cast<unsigned char>(bytes[16 + 3 * 8]), 0x01);
}

TEST(Snapshot, RoundTripsRandomNetworks) {
  Rng rng(4);
  for (auto [chi, ell] : {std::pair<std::size_t, std::size_t>{2, 1}, {5, 13}, {100, 64}, {7, 64}}) {
    const NetworkShape shape(chi, ell);
    const Network net = test::random_network(shape, 300, std::min<std::size_t>(chi, 6), rng);
    const Network back = from_bytes(to_bytes(net));
    EXPECT_EQ(back.shape(), shape);
    EXPECT_EQ(back.weights(), net.weights());
  }
}

TEST(Snapshot, RoundTripsThroughAFile) {
  Rng rng(8);
  const Network net = test::random_network(NetworkShape(20, 16), 50, 6, rng);
  const std::string path = ::testing::TempDir() + "gbnn_snapshot_test.bin";
  write_snapshot(net, path);
  EXPECT_EQ(read_snapshot(path).weights(), net.weights());
  std::remove(path.c_str());
  EXPECT_THROW(read_snapshot(path), std::runtime_error);
}

TEST(Snapshot, RejectsCorruptInput) {
  Network net(NetworkShape(3, 2));
  net.store(Message{1, 0, 2});
  const auto good = to_bytes(net);

  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(from_bytes(bad_magic), std::runtime_error);

  auto bad_version = good;
  bad_version[4] = 9;
  EXPECT_THROW(from_bytes(bad_version), std::runtime_error);

  EXPECT_THROW(from_bytes(good.substr(0, good.size() - 1)), std::runtime_error);
  EXPECT_THROW(from_bytes(good.substr(0, 10)), std::runtime_error);

  auto bad_shape = good;
  bad_shape[8] = 1;  // chi = 1
  EXPECT_THROW(from_bytes(bad_shape), std::runtime_error);

  auto intra = good;
  intra[16] |= 0x01;  // fanals 0 and 1 share cluster 1
  EXPECT_THROW(from_bytes(intra), std::runtime_error);

  auto padding = good;
  padding[16 + 4 * 8] |= 0x02;  // row 4 has one column
  EXPECT_THROW(from_bytes(padding), std::runtime_error);
}
