#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "admaiora/radio_model.hpp"

using namespace admaiora;

TEST_CASE("log-distance path loss") {
  PathLossModel m;  // 127.41 dB at 40 m, gamma 2.08, no shadowing
  CHECK(path_loss_db(m, 40.0) == doctest::Approx(127.41).epsilon(1e-12));
  CHECK(path_loss_db(m, 400.0) == doctest::Approx(148.21).epsilon(1e-9));
  CHECK(path_loss_db(m, m.d0_m) == doctest::Approx(m.l0_db));
  CHECK_THROWS_AS(path_loss_db(m, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(path_loss_db(m, -5.0), std::invalid_argument);
}

TEST_CASE("path loss strictly increases with distance, rssi decreases") {
  PathLossModel m;
  double prev_loss = path_loss_db(m, 1.0);
  double prev_rssi = rssi_dbm(14.0, m, 1.0);
  for (double d = 10.0; d <= 2000.0; d += 10.0) {
    const double loss = path_loss_db(m, d);
    const double rssi = rssi_dbm(14.0, m, d);
    CHECK(loss > prev_loss);
    CHECK(rssi < prev_rssi);
    prev_loss = loss;
    prev_rssi = rssi;
  }
}

TEST_CASE("rssi") {
  PathLossModel m;
  CHECK(rssi_dbm(14.0, m, 40.0) == doctest::Approx(-113.41).epsilon(1e-9));
  CHECK(rssi_dbm(14.0, m, m.d0_m) == doctest::Approx(14.0 - m.l0_db));
  CHECK(rssi_dbm(0.0, m, 400.0) == doctest::Approx(-148.21).epsilon(1e-9));
}

TEST_CASE("shadowing draws come from the supplied stream") {
  PathLossModel m;
  m.sigma2_db2 = 16.0;
  RngStream a(42), b(42), c(43);
  CHECK(path_loss_db(m, 100.0, &a) == path_loss_db(m, 100.0, &b));
  CHECK(path_loss_db(m, 100.0, &a) != path_loss_db(m, 100.0, &c));
  // sigma2 = 0 consumes nothing
  m.sigma2_db2 = 0.0;
  RngStream d(7), e(7);
  (void)path_loss_db(m, 100.0, &d);
  CHECK(d.next_u64() == e.next_u64());
}

TEST_CASE("rssi matrix") {
  PathLossModel m;
  RngStream rng(1);
  std::vector<Position> gws = {{0.0, 0.0}};
  std::vector<Position> nodes = {{40.0, 0.0}};
  RssiMatrix r = build_rssi_matrix(nodes, gws, m, 14.0, rng);
  CHECK(r.at(0, 0) == doctest::Approx(-113.41).epsilon(1e-9));

  SUBCASE("distance clamps at one meter") {
    std::vector<Position> close = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
    RngStream rng2(1);
    RssiMatrix rc = build_rssi_matrix(close, gws, m, 14.0, rng2);
    CHECK(rc.at(0, 0) == rc.at(0, 2));
    CHECK(rc.at(0, 1) == rc.at(0, 2));
  }

  SUBCASE("equidistant gateways see the same power without shadowing") {
    std::vector<Position> two_gws = {{-100.0, 0.0}, {100.0, 0.0}};
    std::vector<Position> mid = {{0.0, 0.0}};
    RngStream rng3(9);
    RssiMatrix rm = build_rssi_matrix(mid, two_gws, m, 14.0, rng3);
    CHECK(rm.at(0, 0) == rm.at(1, 0));
  }

  SUBCASE("reproducible per seed, bit for bit") {
    PathLossModel shadowed = m;
    shadowed.sigma2_db2 = 9.0;
    std::vector<Position> many;
    for (int i = 1; i <= 20; ++i) many.push_back({static_cast<double>(10 * i), 5.0});
    RngStream s1(123), s2(123);
    RssiMatrix a = build_rssi_matrix(many, gws, shadowed, 14.0, s1);
    RssiMatrix b = build_rssi_matrix(many, gws, shadowed, 14.0, s2);
    for (int n = 0; n < a.n_nodes(); ++n) CHECK(a.at(0, n) == b.at(0, n));
  }

  SUBCASE("empty inputs rejected") {
    RngStream rng4(1);
    CHECK_THROWS_AS(build_rssi_matrix({}, gws, m, 14.0, rng4), std::invalid_argument);
    CHECK_THROWS_AS(build_rssi_matrix(nodes, {}, m, 14.0, rng4), std::invalid_argument);
  }
}

TEST_CASE("default sensitivity table") {
  const SensitivityTable t = SensitivityTable::defaults();
  CHECK(t.threshold_dbm(7, 125000) == -123.0);
  CHECK(t.threshold_dbm(9, 125000) == -129.0);
  CHECK(t.threshold_dbm(11, 125000) == -134.5);
  CHECK(t.threshold_dbm(12, 125000) == -137.0);
  for (int bw : {125000, 250000, 500000}) {
    for (int sf = kSfMin; sf < kSfMax; ++sf) {
      CHECK(t.threshold_dbm(sf + 1, bw) < t.threshold_dbm(sf, bw));
    }
  }
}

TEST_CASE("non-monotone sensitivity tables are rejected") {
  SensitivityTable::Column bad = {-123.0, -126.0, -126.0, -132.0, -134.5, -137.0};
  const SensitivityTable good = SensitivityTable::defaults();
  CHECK_THROWS_WITH_AS(SensitivityTable(bad, good.column(250000), good.column(500000)),
                       doctest::Contains("strictly decreasing"), std::invalid_argument);
}

TEST_CASE("reachable SF sets") {
  const SensitivityTable sens = SensitivityTable::defaults();
  RssiMatrix r(1, 3);
  r.at(0, 0) = -120.0;
  r.at(0, 1) = -127.0;
  r.at(0, 2) = -200.0;

  SfSet s0 = reachable_sfs_at(r, sens, 0, 0, 125000);
  for (int sf = 7; sf <= 12; ++sf) CHECK(s0.contains(sf));
  CHECK(s0.min_sf() == 7);

  SfSet s1 = reachable_sfs_at(r, sens, 0, 1, 125000);
  CHECK_FALSE(s1.contains(7));
  CHECK_FALSE(s1.contains(8));
  for (int sf = 9; sf <= 12; ++sf) CHECK(s1.contains(sf));
  CHECK(s1.min_sf() == 9);

  CHECK(reachable_sfs_at(r, sens, 0, 2, 125000).empty());
}

TEST_CASE("reachable sets are upward-closed in SF") {
  const SensitivityTable sens = SensitivityTable::defaults();
  RngStream rng(31337);
  RssiMatrix r(2, 50);
  for (int gw = 0; gw < 2; ++gw) {
    for (int n = 0; n < 50; ++n) r.at(gw, n) = rng.uniform(-150.0, -110.0);
  }
  for (int n = 0; n < 50; ++n) {
    for (const SfSet& set : reachable_sfs(r, sens, n, 125000)) {
      for (int sf = kSfMin; sf < kSfMax; ++sf) {
        if (set.contains(sf)) CHECK(set.contains(sf + 1));
      }
    }
  }
}
