#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "test_fields.hpp"
#include "wickflow/errors.hpp"
#include "wickflow/io.hpp"
#include "wickflow/spectral.hpp"

using namespace wickflow;

TEST(Snapshots, RoundTripAndLayout)
{
  std::mt19937_64 rng(1);
  const TorusGrid g(3);
  std::vector<SpectralField> u = {wickflow::testing::random_field(g, rng), wickflow::testing::random_field(g, rng)};
  const auto path = std::filesystem::temp_directory_path() / "wickflow_test" / "snap.wck";
  io::write_snapshots(path, u);
  EXPECT_EQ(std::filesystem::file_size(path), 16u + 2u * g.point_count() * 8u);
  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "WCK1");
  unsigned char kb[4];
  is.read(reinterpret_cast<char*>(kb), 4);
  EXPECT_EQ(kb[0], 3);
  const auto back = io::read_snapshots(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].grid(), g);
  EXPECT_EQ(relative_difference(back[1], to_real(u[1])), 0.0);
  std::filesystem::remove_all(path.parent_path());
}

TEST(Snapshots, RejectsBadMagic)
{
  const auto path = std::filesystem::temp_directory_path() / "wickflow_bad.wck";
  std::ofstream(path) << "NOPE0000000000000";
  EXPECT_THROW(io::read_snapshots(path), ConfigurationError);
  std::filesystem::remove(path);
}

TEST(Csv, HeaderAndRows)
{
  const auto path = std::filesystem::temp_directory_path() / "wickflow_test.csv";
  io::write_csv(path, {"t", "x"}, {{0.0, 1.5}, {0.1, -2.0}});
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,x");
  std::getline(is, line);
  EXPECT_EQ(line, "0,1.5");
  EXPECT_THROW(io::write_csv(path, {"a"}, {{1.0, 2.0}}), ConfigurationError);
  std::filesystem::remove(path);
}
