#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "wshrink/errors.hpp"
#include "wshrink/io.hpp"

using namespace wshrink;

TEST(Io, DoubleRoundTrip) {
  for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0}) EXPECT_EQ(io::parse_double(io::format_double(x), "x"), x);
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isnan(io::parse_double("nan", "x")));
  EXPECT_THROW(io::parse_double("1.5x", "x"), InputError);
  EXPECT_THROW(io::parse_int("3.5", "n"), InputError);
}

TEST(Io, KeyValues) {
  const auto kv = io::parse_key_values("# comment\n a = 1 \n\nb=two # trailing\n");
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two");
  EXPECT_THROW(io::parse_key_values("a=1\na=2\n"), InputError);
  EXPECT_THROW(io::parse_key_values("novalue\n"), InputError);
}

TEST(Io, SignalFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "wshrink_io_test";
  std::filesystem::create_directories(dir);
  const Signal s{1.0, -0.5, 1e-17, 3.0};
  io::write_signal(dir / "s.txt", s);
  EXPECT_EQ(io::read_signal(dir / "s.txt"), s);
  EXPECT_THROW(io::parse_signal("1\n2\n3\n"), InputError);
  EXPECT_THROW(io::parse_signal("1\nnan\n"), InputError);
  EXPECT_THROW(io::parse_signal("1\nabc\n"), InputError);
  EXPECT_THROW(io::read_signal(dir / "missing.txt"), InputError);
  io::atomic_write(dir / "s.txt", "x");
  EXPECT_EQ(io::read_file(dir / "s.txt"), "x");
  std::filesystem::remove_all(dir);
}
