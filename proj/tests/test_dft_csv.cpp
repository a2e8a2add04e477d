#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>

#include "commsense/csv.hpp"
#include "commsense/dft.hpp"
#include "commsense/errors.hpp"

using namespace commsense;

namespace {

// O(N^2) unitary DFT straight from the definition.
std::vector<cplx> naive_dft(const std::vector<cplx>& x, int sign) {
  const auto n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx sum{};
    for (std::size_t m = 0; m < n; ++m) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k * m % n) / static_cast<double>(n);
      sum += x[m] * std::polar(1.0, angle);
    }
    out[k] = sum / std::sqrt(static_cast<double>(n));
  }
  return out;
}

std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& c : v) c = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST_CASE("dft matches the direct sum for several sizes") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1, 2, 3, 8, 12, 100, 128}) {
    const auto x = random_vector(n, rng);
    const auto fwd = dft_forward(x);
    const auto inv = dft_inverse(x);
    const auto ref_fwd = naive_dft(x, -1);
    const auto ref_inv = naive_dft(x, +1);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(fwd[k] - ref_fwd[k]) < 1e-10);
      CHECK(std::abs(inv[k] - ref_inv[k]) < 1e-10);
    }
  }
}

TEST_CASE("dft round trip and energy") {
  std::mt19937_64 rng(11);
  const auto x = random_vector(512, rng);
  const auto back = dft_inverse(dft_forward(x));
  double ex = 0.0;
  double ey = 0.0;
  const auto y = dft_forward(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(back[i] - x[i]) < 1e-12);
    ex += std::norm(x[i]);
    ey += std::norm(y[i]);
  }
  CHECK(ey == doctest::Approx(ex).epsilon(1e-12));
  CHECK(dft_forward(std::vector<cplx>{}).empty());
}

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(csv::parse_double(csv::format_double(v), "v") == v);
  }
  CHECK(csv::format_double(0.5) == "0.5");
  CHECK(csv::format_double(4.0) == "4");
}

TEST_CASE("field parsers reject malformed input") {
  CHECK(csv::parse_int("42", "n") == 42);
  CHECK(csv::parse_uint("18446744073709551615", "s") == std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(csv::parse_double("1.5x", "v"), DataError);
  CHECK_THROWS_AS(csv::parse_double("", "v"), DataError);
  CHECK_THROWS_AS(csv::parse_int("3.0", "n"), DataError);
  CHECK_THROWS_AS(csv::parse_uint("-1", "s"), DataError);
  const auto parts = csv::split("a,,b");
  REQUIRE(parts.size() == 3);
  CHECK(parts[1].empty());
}

TEST_CASE("file helpers report IO failures") {
  CHECK_THROWS_AS(csv::read_lines("/nonexistent/dir/file.csv"), IoError);
  CHECK_THROWS_AS(csv::write_file("/nonexistent/dir/file.csv", "x"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "commsense_csv_lines.txt";
  csv::write_file(path, "a\r\nb\n");
  const auto lines = csv::read_lines(path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "a");
  CHECK(lines[1] == "b");
  std::filesystem::remove(path);
}
