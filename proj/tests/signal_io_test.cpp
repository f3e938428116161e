#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "neurohome/error.hpp"
#include "neurohome/signal_io.hpp"
#include "neurohome/text.hpp"
#include "oracles.hpp"

using namespace neurohome;

TEST_CASE("signal file round-trips bit-exactly") {
  std::mt19937_64 rng(1);
  auto w = oracle::window(oracle::gaussian(500, 3.0, rng), 256);
  w.samples.push_back(0.0);
  w.samples.push_back(-0.0);
  w.samples.push_back(1e-300);
  w.samples.push_back(123456789.125);
  w.channel = "O2 left";
  std::stringstream ss;
  io::write_signal(ss, w);
  const auto back = io::parse_signal(ss);
  CHECK(back.sample_rate == 256);
  CHECK(back.channel == "O2 left");
  REQUIRE(back.size() == w.size());
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(back.samples[i] == w.samples[i]);
}

TEST_CASE("signal file header and body layout") {
  std::stringstream ss;
  io::write_signal(ss, oracle::window({1.5, -2.0}, 512));
  CHECK(ss.str() == "# fs=512 channel=test\n1.5\n-2\n");
}

TEST_CASE("signal file parse errors carry byte offsets") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return io::parse_signal(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("fs=512 channel=x\n1\n"), ParseError);
  CHECK_THROWS_AS(parse("# fs=abc channel=x\n1\n"), ParseError);
  CHECK_THROWS_AS(parse("# fs=0 channel=x\n1\n"), ParseError);
  CHECK_THROWS_AS(parse("# fs=512\n1\n"), ParseError);
  try {
    parse("# fs=512 channel=x\n1.0\n2.5\n1e3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 27);
  }
  for (const char* bad : {"nan", "inf", "1.2.3", "", " 1", "0x10"}) {
    CHECK_THROWS_AS(parse(std::string("# fs=512 channel=x\n") + bad + "\n"), ParseError);
  }
  CHECK(parse("# fs=512 channel=x\n").samples.empty());
}

TEST_CASE("strict decimal parsing") {
  CHECK(text::parse_decimal("12") == 12.0);
  CHECK(text::parse_decimal("-0.5") == -0.5);
  CHECK(text::parse_decimal("+3.") == 3.0);
  CHECK(text::parse_decimal(".25") == 0.25);
  CHECK_FALSE(text::parse_decimal("-"));
  CHECK_FALSE(text::parse_decimal("."));
  CHECK_FALSE(text::parse_decimal("1e5"));
  CHECK_FALSE(text::parse_decimal("Infinity"));
  CHECK_THROWS_AS(text::format_decimal(std::nan("")), InvalidInput);
}

TEST_CASE("load_signal names the path on failure") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto missing = dir / "neurohome_missing_signal.txt";
  std::filesystem::remove(missing);
  try {
    io::load_signal(missing);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
  }
  const auto bad = dir / "neurohome_bad_signal.txt";
  {
    std::ofstream(bad) << "# fs=512 channel=x\n1\noops\n";
  }
  try {
    io::load_signal(bad);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
    CHECK(e.offset() == 21);
  }
  const auto good = dir / "neurohome_good_signal.txt";
  io::save_signal(good, oracle::window({0.25, 0.5}));
  CHECK(io::load_signal(good).samples == std::vector<double>{0.25, 0.5});
}
