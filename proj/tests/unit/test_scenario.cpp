#include <doctest.h>

#include <random>

#include <fmt/format.h>

#include "zbsim/harness/scenario_file.hpp"
#include "zbsim/scenario/config.hpp"
#include "zbsim/scenario/energy.hpp"
#include "zbsim/scenario/trajectory.hpp"

using namespace zbsim;

TEST_SUITE("scenario") {

TEST_CASE("default trajectory positions") {
  const Trajectory t = Trajectory::default_line();
  CHECK(t.position_at(SimTime{}) == Position{0, 0});
  CHECK(t.position_at(SimTime::millis(7500)).x == doctest::Approx(7.5));
  CHECK(t.position_at(SimTime::millis(7500)).y == 0.0);
  CHECK(t.position_at(SimTime::seconds(100)) == Position{15, 0});
  CHECK(t.end_time() == SimTime::seconds(15));
  CHECK(t.min_x() == 0.0);
  CHECK(t.max_x() == 15.0);
}

TEST_CASE("multi-leg trajectory interpolates each leg at its own speed") {
  const Trajectory t({{{0, 0}, SimTime{}}, {{10, 0}, SimTime::seconds(5)}, {{10, 6}, SimTime::seconds(8)}});
  CHECK(t.position_at(SimTime::seconds(1)).x == doctest::Approx(2.0));
  CHECK(t.position_at(SimTime::seconds(7)).x == doctest::Approx(10.0));
  CHECK(t.position_at(SimTime::seconds(7)).y == doctest::Approx(4.0));
  CHECK(t.max_x() == 10.0);
}

TEST_CASE("trajectory rejects non-increasing or empty waypoint lists") {
  CHECK_THROWS_AS(Trajectory(std::vector<Waypoint>{}), std::invalid_argument);
  CHECK_THROWS_AS(Trajectory({{{0, 0}, SimTime::seconds(1)}, {{1, 0}, SimTime::seconds(1)}}), std::invalid_argument);
  CHECK_NOTHROW(Trajectory({{{4, 2}, SimTime{}}}));
}

TEST_CASE("energy ledger examples") {
  const CurrentModel m;
  SUBCASE("1 s of Tx at 0 dBm and 3 V is 90 mJ") {
    EnergyLedger l(m, 3.0, SimTime{}, RadioMode::Tx, 0.0);
    l.close(SimTime::seconds(1));
    CHECK(l.breakdown().tx_mj == doctest::Approx(90.0).epsilon(1e-12));
    CHECK(l.total_mj() == doctest::Approx(90.0).epsilon(1e-12));
  }
  SUBCASE("1 hour asleep at 3 V is 32.4 mJ") {
    EnergyLedger l(m, 3.0, SimTime{}, RadioMode::Sleep);
    l.close(SimTime::seconds(3600));
    CHECK(l.total_mj() == doctest::Approx(32.4).epsilon(1e-12));
  }
  SUBCASE("zero-length interval adds nothing") {
    EnergyLedger l(m, 3.0, SimTime::seconds(2), RadioMode::Tx, 6.0);
    l.accrue(RadioMode::Idle, 0.0, SimTime::seconds(2));
    l.close(SimTime::seconds(2));
    CHECK(l.total_mj() == 0.0);
    CHECK(l.total_time() == SimTime{});
  }
  SUBCASE("going back in time throws") {
    EnergyLedger l(m, 3.0, SimTime::seconds(2), RadioMode::Idle);
    CHECK_THROWS_AS(l.accrue(RadioMode::Tx, 0.0, SimTime::seconds(1)), EnergyError);
  }
  SUBCASE("doubling the voltage doubles the energy") {
    EnergyLedger a(m, 3.0, SimTime{}, RadioMode::Rx);
    EnergyLedger b(m, 6.0, SimTime{}, RadioMode::Rx);
    a.close(SimTime::millis(1234));
    b.close(SimTime::millis(1234));
    CHECK(b.total_mj() == doctest::Approx(2 * a.total_mj()));
  }
  SUBCASE("tx current grows with output power") {
    CHECK(m.tx_current_ma(0) == 30.0);
    CHECK(m.tx_current_ma(6) == doctest::Approx(39.0));
    EnergyLedger l(m, 3.0, SimTime{}, RadioMode::Tx, 6.0);
    l.close(SimTime::seconds(1));
    CHECK(l.total_mj() == doctest::Approx(117.0));
    CHECK(l.mean_tx_power_dbm() == doctest::Approx(6.0));
  }
}

TEST_CASE("splitting intervals never changes the total") {
  const CurrentModel m;
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    EnergyLedger whole(m, 3.0, SimTime{}, RadioMode::Idle);
    EnergyLedger split(m, 3.0, SimTime{}, RadioMode::Idle);
    SimTime t;
    const RadioMode modes[] = {RadioMode::Sleep, RadioMode::Idle, RadioMode::Rx, RadioMode::Tx};
    for (int step = 0; step < 40; ++step) {
      const RadioMode next = modes[gen() % 4];
      const double p = static_cast<double>(gen() % 7);
      const SimTime len = SimTime::micros(static_cast<std::int64_t>(gen() % 50'000));
      // `split` records a redundant transition halfway through every interval.
      split.accrue(split.mode(), split.tx_power_dbm(), t + SimTime::micros(len.us() / 2));
      t += len;
      whole.accrue(next, p, t);
      split.accrue(next, p, t);
    }
    whole.close(t);
    split.close(t);
    CHECK(whole.total_mj() == doctest::Approx(split.total_mj()).epsilon(1e-12));
    CHECK(whole.total_time() == t);
    for (RadioMode mode : modes) CHECK(whole.time_in(mode) == split.time_in(mode));
  }
}

TEST_CASE("validate rejects broken configurations") {
  const ScenarioConfig good = default_scenario();
  CHECK_NOTHROW(good.validate());

  auto expect_key = [](const ScenarioConfig& cfg, const std::string& key) {
    try {
      cfg.validate();
      FAIL("expected a ScenarioError for " << key);
    } catch (const ScenarioError& e) {
      CHECK(e.key() == key);
      CHECK(e.line() == 0);
    }
  };

  ScenarioConfig c = good;
  c.phy.tx_power_dbm = 1.5;
  expect_key(c, "phy.tx_power");

  c = good;
  c.beacon_order = BeaconOrder{16};
  expect_key(c, "phy.beacon_order");

  c = good;
  c.channel = 27;
  expect_key(c, "phy.channel");

  c = good;
  c.traffic.period = SimTime{};
  expect_key(c, "traffic.period");

  c = good;
  c.handover.response_jitter = c.handover.probe_window;
  expect_key(c, "handover.response_jitter");

  c = good;
  c.sweep_powers = {0, 1};
  expect_key(c, "sweep.powers");

  c = good;
  for (auto& n : c.nodes) {
    if (n.role.kind == DeviceKind::Coordinator) n.role.kind = DeviceKind::Router;
  }
  expect_key(c, "nodes");

  c = good;
  c.nodes.push_back(c.nodes.front());
  expect_key(c, fmt::format("node {}", c.nodes.front().id));

  c = good;
  for (auto& n : c.nodes) {
    if (n.role.is_mobile()) n.role.kind = DeviceKind::Router;
  }
  CHECK_THROWS_AS(c.validate(), ScenarioError);
}

TEST_CASE("with_fixed_power pins every node and disables tpc") {
  ScenarioConfig c = default_scenario();
  c.tpc.enabled = true;
  c.nodes.front().tx_power_dbm = 6;
  const ScenarioConfig f = with_fixed_power(c, 3);
  CHECK(f.phy.tx_power_dbm == 3.0);
  CHECK_FALSE(f.tpc.enabled);
  for (const auto& n : f.nodes) {
    CHECK_FALSE(n.tx_power_dbm.has_value());
    CHECK(f.node_phy(n).tx_power_dbm == 3.0);
  }
}

}
