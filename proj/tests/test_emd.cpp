// Copyright 2026 The hwpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hwpd/emd.hpp"
#include "hwpd/nonlinear.hpp"
#include "oracles.hpp"

using namespace hwpd::emd;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> tone(std::size_t n, double fs, double f, double amp = 1.0,
                         double phase = 0.0) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = amp * std::sin(2.0 * kPi * f * i / fs + phase);
  return s;
}

double energy(const std::vector<double>& s) {
  double e = 0;
  for (double v : s) e += v * v;
  return e;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  return oracle::pearson(a, b);
}

void check_invariants(const std::vector<double>& s, const Decomposition& d) {
  REQUIRE(d.source_length == s.size());
  REQUIRE(d.residual.size() == s.size());
  double scale = 1.0;
  for (double v : s) scale = std::max(scale, std::fabs(v));
  for (std::size_t i = 0; i < s.size(); ++i) {
    double sum = d.residual[i];
    for (const auto& imf : d.imfs) sum += imf[i];
    REQUIRE(std::fabs(s[i] - sum) <= 1e-8 * scale);
  }
  for (const auto& imf : d.imfs) {
    REQUIRE(imf.size() == s.size());
    CHECK(satisfies_imf_criterion(imf));
  }
  CHECK(d.size() <= 10);
  CHECK(static_cast<double>(d.size()) <= std::log2(static_cast<double>(s.size())) + 2.0);
}

}  // namespace

TEST_CASE("natural spline interpolates knots and reproduces lines") {
  std::vector<double> kx = {-2, 0, 3, 7, 12}, ky = {1, -1, 2, 0, 5};
  auto y = natural_spline(kx, ky, 13);
  CHECK(y[0] == doctest::Approx(-1.0));
  CHECK(y[3] == doctest::Approx(2.0));
  CHECK(y[7] == doctest::Approx(0.0));
  CHECK(y[12] == doctest::Approx(5.0));
  std::vector<double> lx = {0, 4, 9, 15}, ly = {1, 9, 19, 31};
  auto l = natural_spline(lx, ly, 16);
  for (std::size_t i = 0; i < l.size(); ++i)
    CHECK(l[i] == doctest::Approx(1.0 + 2.0 * i).epsilon(1e-12));
}

TEST_CASE("extrema, zero crossings, monotonicity") {
  auto e = find_extrema(std::vector<double>{0, 2, 2, 2, 1, -1, -1, 0, 3});
  CHECK(e.maxima == std::vector<std::size_t>{2});
  CHECK(e.minima == std::vector<std::size_t>{5});
  CHECK(count_zero_crossings(std::vector<double>{1, -1, 0, -2, 3, 0, 0, 4}) == 2);
  CHECK(is_monotone(std::vector<double>{1, 1, 2, 3}));
  CHECK(is_monotone(std::vector<double>{3, 2, 2}));
  CHECK_FALSE(is_monotone(std::vector<double>{1, 2, 1}));
}

TEST_CASE("sift: pure 2 Hz tone gives one IMF with the energy") {
  auto s = tone(200, 100.0, 2.0);
  auto d = sift(s);
  check_invariants(s, d);
  REQUIRE(d.size() == 1);
  CHECK(energy(d.imfs[0]) >= 0.99 * energy(s));
  CHECK(energy(d.residual) <= 0.01 * energy(s));
}

TEST_CASE("sift: 10 Hz + 1 Hz puts the fast tone in IMF1") {
  auto fast = tone(400, 100.0, 10.0);
  auto slow = tone(400, 100.0, 1.0);
  std::vector<double> s(400);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = fast[i] + slow[i];
  auto d = sift(s);
  check_invariants(s, d);
  REQUIRE(d.size() >= 1);
  CHECK(correlation(d.imfs[0], fast) >= 0.95);
}

TEST_CASE("sift: ramp and short or flat signals give no IMFs") {
  std::vector<double> ramp(100);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.3 * i - 4.0;
  auto d = sift(ramp);
  CHECK(d.size() == 0);
  CHECK(d.residual == ramp);
  CHECK(sift(std::vector<double>{1, -1, 1, -1, 1, -1, 1}).size() == 0);
  CHECK(sift(std::vector<double>(50, 2.0)).size() == 0);
  CHECK(sift(std::vector<double>{0, 1, 0, 1, 2, 3, 4, 5, 6, 7}).size() == 0);
}

TEST_CASE("sift: random signals reconstruct and give valid IMFs") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> len(8, 600);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<double> s(len(rng));
    double walk = 0;
    for (double& v : s) {
      walk += g(rng);
      v = (rep % 2 ? walk : g(rng)) * 100.0;
    }
    CAPTURE(rep);
    check_invariants(s, sift(s));
  }
}

TEST_CASE("sift: deterministic bit for bit") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  std::vector<double> s(300);
  for (double& v : s) v = g(rng);
  auto a = sift(s), b = sift(s);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.imfs[k] == b.imfs[k]);
  CHECK(a.residual == b.residual);
}

TEST_CASE("intrinsic features: missing IMFs and constant IMF") {
  Decomposition one;
  one.source_length = 50;
  one.imfs = {tone(50, 50.0, 5.0)};
  one.residual.assign(50, 0.1);
  auto f = intrinsic_features("x", one);
  REQUIRE(f.size() == 13);
  CHECK(f[0].name == "x.imf1.shannon");
  CHECK(f[6].name == "x.imf2.shannon");
  CHECK(f[12].name == "x.isnr");
  for (int k = 0; k < 6; ++k) CHECK(f[k].value.has_value());
  for (int k = 6; k < 13; ++k) CHECK_FALSE(f[k].value.has_value());

  Decomposition zero;
  zero.source_length = 20;
  zero.imfs = {std::vector<double>(20, 0.0)};
  zero.residual.assign(20, 0.0);
  auto z = intrinsic_features("p", zero);
  CHECK(*z[0].value == 0.0);
  CHECK(*z[1].value == 0.0);
  CHECK(*z[2].value == 0.0);
}

TEST_CASE("intrinsic features: noisy IMF1 has higher entropy than a clean tone") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g(0.0, 0.5);
  auto clean = tone(512, 100.0, 20.0);
  std::vector<double> noisy = clean;
  for (double& v : noisy) v += g(rng);
  auto dc = sift(clean), dn = sift(noisy);
  REQUIRE(dc.size() >= 1);
  REQUIRE(dn.size() >= 1);
  CHECK(hwpd::nonlinear::shannon_entropy(dn.imfs[0]) >
        hwpd::nonlinear::shannon_entropy(dc.imfs[0]));
}

TEST_CASE("intrinsic SNR") {
  Decomposition two;
  two.imfs = {tone(40, 40.0, 5.0), tone(40, 40.0, 2.0)};
  two.residual.assign(40, 0.0);
  CHECK_FALSE(intrinsic_snr(two).has_value());

  // Two strong high bands over a weak slow band.
  std::vector<double> s(1000);
  auto a = tone(1000, 200.0, 40.0, 1.0), b = tone(1000, 200.0, 12.0, 0.8),
       c = tone(1000, 200.0, 2.0, 0.2), e = tone(1000, 200.0, 0.5, 0.1);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a[i] + b[i] + c[i] + e[i];
  auto d = sift(s);
  check_invariants(s, d);
  REQUIRE(d.size() >= 3);
  auto snr = intrinsic_snr(d);
  REQUIRE(snr.has_value());
  CHECK(*snr > 1.0);
  auto snr_no_res = intrinsic_snr(d, false);
  REQUIRE(snr_no_res.has_value());
  CHECK(*snr_no_res >= *snr);

  std::vector<double> k3 = s;
  for (double& v : k3) v *= 3.0;
  auto d3 = sift(k3);
  REQUIRE(intrinsic_snr(d3).has_value());
  CHECK(std::fabs(*intrinsic_snr(d3) - *snr) <= 1e-3 * *snr);
}

TEST_CASE("decomposition CSV has one column per IMF plus the residual") {
  auto s = tone(64, 32.0, 3.0);
  auto d = sift(s);
  std::ostringstream out;
  write_decomposition_csv(d, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("imf1,", 0) == 0);
  CHECK(header.substr(header.size() - 8) == "residual");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 64);
}
