#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "commsense/errors.hpp"
#include "commsense/lte_waveform.hpp"
#include "commsense/scene_channel.hpp"
#include "commsense/ue_receiver.hpp"

using namespace commsense;

namespace {

CirFeature pipeline(const GridConfig& cfg, const PathSet& paths, double snr, std::uint64_t payload,
                    std::uint64_t noise, std::size_t taps = 32) {
  const auto grid = build_subframe_grid(cfg, payload);
  const auto rx = apply_channel(grid, frequency_response(paths, cfg), snr, noise);
  const auto est = estimate_channel_ls(rx, generate_crs(cfg));
  return extract_feature(cir_from_estimates(est.values), taps);
}

std::size_t argmax_after_first(const std::vector<double>& taps) {
  return static_cast<std::size_t>(std::max_element(taps.begin() + 1, taps.end()) - taps.begin());
}

}  // namespace

TEST_CASE("flat and ramp channels are recovered exactly") {
  const GridConfig cfg;
  const auto pilots = generate_crs(cfg);
  const auto grid = build_subframe_grid(cfg, 1);

  const auto flat = estimate_channel_ls(grid, pilots);
  CHECK(flat.values.size() == 100);
  for (std::size_t i = 0; i < flat.values.size(); ++i) {
    CHECK(std::abs(flat.values[i] - cplx(1.0, 0.0)) < 1e-12);
    CHECK(flat.subcarriers[i] == static_cast<int>(3 * i));
    if (i) CHECK(flat.subcarriers[i] > flat.subcarriers[i - 1]);
  }

  std::vector<cplx> ramp(300);
  for (int k = 0; k < 300; ++k) ramp[k] = cplx(0.5 + 0.01 * k, -0.002 * k);
  const auto rx = apply_channel(grid, ramp, kNoiseless, 0);
  const auto est = estimate_channel_ls(rx, pilots);
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    CHECK(std::abs(est.values[i] - ramp[est.subcarriers[i]]) < 1e-12);
  }
}

TEST_CASE("pilot map mismatches are rejected") {
  const GridConfig cfg;
  const auto grid = build_subframe_grid(cfg, 1);
  auto pilots = generate_crs(cfg);

  auto shorter = pilots;
  shorter.pop_back();
  CHECK_THROWS_AS(estimate_channel_ls(grid, shorter), DataError);

  auto moved = pilots;
  moved[0].subcarrier += 1;
  CHECK_THROWS_AS(estimate_channel_ls(grid, moved), DataError);

  auto duplicated = pilots;
  duplicated[1] = duplicated[0];
  CHECK_THROWS_AS(estimate_channel_ls(grid, duplicated), DataError);

  auto zero = pilots;
  zero[3].value = cplx{};
  CHECK_THROWS_AS(estimate_channel_ls(grid, zero), DataError);
}

TEST_CASE("averaging the two pilot symbols halves the estimate variance") {
  GridConfig cfg;
  cfg.fft_size = 128;
  cfg.occupied_subcarriers = 60;
  cfg.cp_length = 16;
  const auto pilots = generate_crs(cfg);
  const std::vector<cplx> ones(60, cplx(1.0, 0.0));

  double averaged = 0.0;
  double single = 0.0;
  std::size_t n_avg = 0;
  std::size_t n_single = 0;
  for (std::uint64_t trial = 0; trial < 10000; ++trial) {
    const auto grid = build_subframe_grid(cfg, trial);
    const auto rx = apply_channel(grid, ones, 0.0, 1000003 * trial + 17);
    const auto est = estimate_channel_ls(rx, pilots);
    for (const auto& v : est.values) {
      averaged += std::norm(v - cplx(1.0, 0.0));
      ++n_avg;
    }
    for (const auto& p : pilots) {
      if (p.symbol != 0) continue;
      single += std::norm(rx.at(p.subcarrier, p.symbol) / p.value - cplx(1.0, 0.0));
      ++n_single;
    }
  }
  const double ratio = (averaged / n_avg) / (single / n_single);
  CHECK(ratio == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("cir of basic estimate sequences") {
  const std::size_t n = 100;
  const std::vector<cplx> constant(n, cplx(0.6, -0.8));
  const auto impulse = cir_from_estimates(constant);
  CHECK(std::abs(impulse[0]) == doctest::Approx(std::sqrt(100.0)).epsilon(1e-12));
  for (std::size_t i = 1; i < n; ++i) CHECK(std::abs(impulse[i]) < 1e-12);

  for (int m : {1, 7, 42}) {
    std::vector<cplx> tone(n);
    for (std::size_t i = 0; i < n; ++i) tone[i] = std::polar(1.0, -2.0 * std::numbers::pi * m * i / n);
    const auto cir = cir_from_estimates(tone);
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<int>(i) == m) {
        CHECK(std::abs(cir[i]) == doctest::Approx(10.0).epsilon(1e-12));
      } else {
        CHECK(std::abs(cir[i]) < 1e-10);
      }
    }
  }
}

TEST_CASE("feature extraction") {
  std::vector<cplx> cir(40);
  cir[0] = cplx(3.0, 4.0);
  const auto f = extract_feature(cir, 32);
  CHECK(f.taps.size() == 32);
  CHECK(f.taps[0] == 1.0);
  for (std::size_t i = 1; i < 32; ++i) CHECK(f.taps[i] == 0.0);
  CHECK(!f.degenerate);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (auto& c : cir) c = {g(rng), g(rng)};
  const auto base = extract_feature(cir, 16);
  auto scaled = cir;
  for (auto& c : scaled) c *= 7.25;
  const auto again = extract_feature(scaled, 16);
  double norm = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(again.taps[i] == doctest::Approx(base.taps[i]).epsilon(1e-12));
    CHECK(base.taps[i] >= 0.0);
    norm += base.taps[i] * base.taps[i];
  }
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<cplx> two(32);
  two[0] = cplx(2.0, 0.0);
  two[5] = std::polar(2.0 * 0.35, 1.1);
  const auto t = extract_feature(two, 8);
  CHECK(t.taps[5] / t.taps[0] == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(t.taps[0] == doctest::Approx(1.0 / std::sqrt(1.0 + 0.35 * 0.35)).epsilon(1e-12));

  const auto zero = extract_feature(std::vector<cplx>(10), 4);
  CHECK(zero.degenerate);
  for (double v : zero.taps) CHECK(v == 0.0);

  CHECK_THROWS_AS(extract_feature(two, 0), DataError);
  CHECK_THROWS_AS(extract_feature(two, 33), DataError);
}

TEST_CASE("end to end without reflectors or noise is an impulse") {
  const GridConfig cfg;
  const auto f = pipeline(cfg, {{0.0, cplx(1.0, 0.0)}}, kNoiseless, 8, 9);
  CHECK(std::abs(f.taps[0] - 1.0) < 1e-6);
  for (std::size_t i = 1; i < f.taps.size(); ++i) CHECK(f.taps[i] < 1e-6);
}

TEST_CASE("feature does not depend on the payload") {
  const GridConfig cfg;
  SceneGeometry scene;
  scene.reflector_count = 2;
  scene.reflector_distance = 4.0;
  scene.circumferential_fraction = 0.75;
  const auto paths = reflector_paths(scene, cfg.carrier_frequency);
  for (double snr : {kNoiseless, 7.0}) {
    const auto a = pipeline(cfg, paths, snr, 1, 55);
    const auto b = pipeline(cfg, paths, snr, 2, 55);
    CHECK(a.taps == b.taps);
  }
}

TEST_CASE("dominant secondary tap sits at the delay in lattice samples") {
  const GridConfig cfg;
  const double lattice_bandwidth = 100 * 3 * cfg.subcarrier_spacing;  // 4.5 MHz
  for (int m : {2, 5, 9, 14}) {
    for (double frac : {-0.3, 0.0, 0.3}) {
      const double tau = (m + frac) / lattice_bandwidth;
      const auto f = pipeline(cfg, {{0.0, cplx(1.0, 0.0)}, {tau, std::polar(0.6, 0.4)}}, kNoiseless, 3, 4);
      CHECK(argmax_after_first(f.taps) == static_cast<std::size_t>(std::lround(tau * lattice_bandwidth)));
    }
  }
}

TEST_CASE("secondary argmax moves monotonically with delay") {
  const GridConfig cfg;
  std::size_t previous = 0;
  for (int step = 0; step <= 60; ++step) {
    const double tau = 0.3e-6 + step * 0.05e-6;
    const auto f = pipeline(cfg, {{0.0, cplx(1.0, 0.0)}, {tau, cplx(0.5, 0.0)}}, kNoiseless, 3, 4);
    const auto arg = argmax_after_first(f.taps);
    CHECK(arg >= previous);
    previous = arg;
  }
  CHECK(previous > 10);
}
