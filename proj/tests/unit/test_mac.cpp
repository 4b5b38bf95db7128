#include <doctest.h>

#include <algorithm>
#include <memory>
#include <vector>

#include "zbsim/harness/scenario_file.hpp"
#include "zbsim/harness/simulation.hpp"
#include "zbsim/mac/channel.hpp"
#include "zbsim/mac/mac.hpp"

using namespace zbsim;

namespace {

struct Station final : Mac::Upper {
  Station(NodeId id, Position pos, Scheduler& sched, Channel& channel, TraceLog& trace, const PhyParams& phy)
      : id(id), pos(pos), rng(7, id), mac(id, sched, channel, rng, trace, CsmaParams{}, 0x1A2B, [this] { return this->pos.x; }) {
    mac.set_upper(this);
    channel.attach(id, phy, [this] { return this->pos; }, &mac, nullptr);
  }
  void on_mac_receive(const Frame& f, const LinkSample&) override { received.push_back(f); }
  void on_mac_done(const Frame& f, TxOutcome o) override { done.emplace_back(f, o); }

  NodeId id;
  Position pos;
  RngStream rng;
  Mac mac;
  std::vector<Frame> received;
  std::vector<std::pair<Frame, TxOutcome>> done;
};

// Transmits back to back forever, keeping the medium busy around it.
struct Jammer final : Channel::Listener {
  Jammer(NodeId id, Channel& channel) : id(id), channel(channel) {}
  void on_frame_received(const Frame&, const LinkSample&) override {}
  void on_transmit_end(const Frame& f) override { channel.transmit(id, f); }
  NodeId id;
  Channel& channel;
};

// Radio without a MAC, driven by direct channel.transmit calls.
struct RawRadio final : Channel::Listener {
  void on_frame_received(const Frame&, const LinkSample&) override {}
  void on_transmit_end(const Frame&) override {}
};

struct Bench {
  explicit Bench(Band band = Band::B2400) : channel(sched, band, trace) {
    phy.pl0_db = 40;
    phy.path_loss_exponent = 2;
    phy.rx_sensitivity_dbm = -85;
  }
  Station& add(NodeId id, double x) {
    stations.push_back(std::make_unique<Station>(id, Position{x, 0}, sched, channel, trace, phy));
    return *stations.back();
  }
  void add_raw(NodeId id, double x) {
    raws.push_back(std::make_unique<RawRadio>());
    channel.attach(id, phy, [x] { return Position{x, 0}; }, raws.back().get(), nullptr);
  }
  std::vector<TraceRecord> rows(TraceKind kind, std::optional<FrameKind> fk = std::nullopt,
                                std::optional<NodeId> node = std::nullopt) const {
    std::vector<TraceRecord> out;
    for (const auto& r : trace.rows()) {
      if (r.kind != kind) continue;
      if (fk && r.frame_kind != fk) continue;
      if (node && r.node_id != *node) continue;
      out.push_back(r);
    }
    return out;
  }

  Scheduler sched;
  TraceLog trace;
  PhyParams phy;
  Channel channel;
  std::vector<std::unique_ptr<Station>> stations;
  std::vector<std::unique_ptr<RawRadio>> raws;
};

Frame data_to(NodeId dst, int payload = 20) {
  Frame f;
  f.kind = FrameKind::Data;
  f.dst = dst;
  f.payload_len = payload;
  return f;
}

}  // namespace

TEST_SUITE("mac") {

TEST_CASE("frame validation and sizes") {
  Frame ack;
  ack.kind = FrameKind::Ack;
  ack.dst = 1;
  CHECK_NOTHROW(validate(ack));
  CHECK(mac_frame_bytes(ack) == 5);
  ack.payload_len = 1;
  CHECK_THROWS_AS(validate(ack), std::invalid_argument);
  CHECK_THROWS_AS(validate(data_to(kBroadcast)), std::invalid_argument);
  CHECK(mac_frame_bytes(data_to(1, 20)) == 31);
  Frame probe;
  probe.kind = FrameKind::ProbeRequest;
  probe.dst = kBroadcast;
  CHECK_NOTHROW(validate(probe));
  CHECK_FALSE(requires_ack(probe));
  probe.dst = 4;
  CHECK(requires_ack(probe));
  CHECK(is_csma_exempt(FrameKind::Beacon));
  CHECK(is_csma_exempt(FrameKind::Ack));
  CHECK_FALSE(is_csma_exempt(FrameKind::Data));
}

TEST_CASE("unicast data is delivered and acknowledged after the turnaround") {
  Bench b;
  auto& a = b.add(1, 0);
  auto& c = b.add(2, 5);
  a.mac.csma_send(data_to(2));
  b.sched.run_until(SimTime::seconds(1));
  REQUIRE(a.done.size() == 1);
  CHECK(a.done[0].second == TxOutcome::Delivered);
  REQUIRE(c.received.size() == 1);
  CHECK(c.received[0].kind == FrameKind::Data);
  CHECK(c.received[0].src == 1);

  const auto data_rx = b.rows(TraceKind::Rx, FrameKind::Data, NodeId{2});
  const auto ack_tx = b.rows(TraceKind::TxStart, FrameKind::Ack, NodeId{2});
  REQUIRE(data_rx.size() == 1);
  REQUIRE(ack_tx.size() == 1);
  CHECK(ack_tx[0].time_us - data_rx[0].time_us == 192);
  CHECK(ack_tx[0].seq == data_rx[0].seq);
  // Acks never go through carrier sensing.
  for (const auto& r : b.rows(TraceKind::Backoff)) CHECK(r.frame_kind != FrameKind::Ack);
  CHECK(a.mac.idle());
  CHECK(c.mac.idle());
}

TEST_CASE("unanswered unicast gives NoAck after 1 + max_frame_retries attempts with the same seq") {
  Bench b;
  auto& a = b.add(1, 0);
  b.add(2, 5000);  // far out of range
  a.mac.csma_send(data_to(2));
  b.sched.run_until(SimTime::seconds(1));
  REQUIRE(a.done.size() == 1);
  CHECK(a.done[0].second == TxOutcome::NoAck);
  const auto tx = b.rows(TraceKind::TxStart, FrameKind::Data, NodeId{1});
  REQUIRE(tx.size() == 4);
  for (const auto& r : tx) CHECK(r.seq == tx[0].seq);
  CHECK(b.rows(TraceKind::Rx).empty());
}

TEST_CASE("broadcast frames finish as Sent without acknowledgment") {
  Bench b;
  auto& a = b.add(1, 0);
  auto& c = b.add(2, 3);
  auto& d = b.add(3, -3);
  Frame probe;
  probe.kind = FrameKind::ProbeRequest;
  probe.dst = kBroadcast;
  a.mac.csma_send(probe);
  b.sched.run_until(SimTime::seconds(1));
  REQUIRE(a.done.size() == 1);
  CHECK(a.done[0].second == TxOutcome::Sent);
  CHECK(c.received.size() == 1);
  CHECK(d.received.size() == 1);
  CHECK(b.rows(TraceKind::TxStart, FrameKind::Ack).empty());
}

TEST_CASE("a permanently busy medium gives ChannelAccessFailure") {
  Bench b;
  auto& a = b.add(1, 0);
  b.add(2, 5);
  Jammer jam(9, b.channel);
  b.channel.attach(9, b.phy, [] { return Position{2, 0}; }, &jam, nullptr);
  Frame noise = data_to(2, 100);
  noise.src = 9;
  b.channel.transmit(9, noise);
  a.mac.csma_send(data_to(2));
  b.sched.run_until(SimTime::seconds(1));
  REQUIRE(a.done.size() == 1);
  CHECK(a.done[0].second == TxOutcome::ChannelAccessFailure);
  const auto cca = b.rows(TraceKind::Cca, std::nullopt, NodeId{1});
  CHECK(cca.size() == static_cast<std::size_t>(CsmaParams{}.max_csma_backoffs + 1));
  for (const auto& r : cca) CHECK(r.outcome == "BUSY");
  CHECK(b.rows(TraceKind::TxStart, FrameKind::Data, NodeId{1}).empty());
}

TEST_CASE("backoff draws stay within 0 .. 2^BE - 1 unit periods") {
  Bench b;
  auto& a = b.add(1, 0);
  b.add(2, 5000);
  for (int i = 0; i < 50; ++i) a.mac.csma_send(data_to(2));
  b.sched.run_until(SimTime::seconds(60));
  CHECK(a.done.size() == 50);
  const auto backoffs = b.rows(TraceKind::Backoff, std::nullopt, NodeId{1});
  CHECK(backoffs.size() == 200);
  for (const auto& r : backoffs) {
    const long us = std::stol(r.outcome);
    CHECK(us % 320 == 0);
    // No busy CCA here, so BE stays at macMinBE = 3.
    CHECK(us <= 7 * 320);
  }
}

TEST_CASE("simultaneous beacons collide at a common receiver") {
  Bench b;
  auto& a = b.add(1, -5);
  auto& c = b.add(2, 5);
  auto& r = b.add(3, 0);
  Frame beacon;
  beacon.kind = FrameKind::Beacon;
  beacon.dst = kBroadcast;
  a.mac.send_immediate(beacon);
  c.mac.send_immediate(beacon);
  b.sched.run_until(SimTime::seconds(1));
  CHECK(r.received.empty());
  CHECK(b.rows(TraceKind::RxCollision, FrameKind::Beacon, NodeId{3}).size() == 2);
  CHECK(b.rows(TraceKind::Backoff).empty());
}

TEST_CASE("send_immediate rejects frames that need CSMA and csma_send rejects exempt kinds") {
  Bench b;
  auto& a = b.add(1, 0);
  CHECK_THROWS_AS(a.mac.send_immediate(data_to(2)), std::invalid_argument);
  Frame beacon;
  beacon.kind = FrameKind::Beacon;
  CHECK_THROWS_AS(a.mac.csma_send(beacon), std::invalid_argument);
}

TEST_CASE("hidden terminals: both senders sense idle and collide at the middle receiver") {
  Bench b;
  // 0 dBm - 40 dB - 20 log10(d) > -85 dBm holds up to about 178 m.
  b.add_raw(1, -150);
  auto& mid = b.add(2, 0);
  b.add_raw(3, 150);
  CHECK_FALSE(in_range(RadioEndpoint{{-150, 0}, &b.phy}, RadioEndpoint{{150, 0}, &b.phy}, 0.0));
  CHECK(in_range(RadioEndpoint{{-150, 0}, &b.phy}, RadioEndpoint{mid.pos, &b.phy}, 0.0));

  // Raw simultaneous transmissions: no sensing can separate them.
  Frame f1 = data_to(2);
  f1.src = 1;
  f1.pan_id = 0x1A2B;
  Frame f3 = data_to(2);
  f3.src = 3;
  f3.pan_id = 0x1A2B;
  b.channel.transmit(1, f1);
  CHECK_FALSE(b.channel.cca_busy(3));
  CHECK(b.channel.cca_busy(2));
  b.channel.transmit(3, f3);
  b.sched.run_until(SimTime::millis(10));
  CHECK(mid.received.empty());
  CHECK(b.rows(TraceKind::RxCollision, FrameKind::Data, NodeId{2}).size() == 2);
  CHECK(b.rows(TraceKind::Rx, FrameKind::Data, NodeId{1}).empty());
  CHECK(b.rows(TraceKind::Rx, FrameKind::Data, NodeId{3}).empty());
}

TEST_CASE("hidden terminals under CSMA never hear each other") {
  Bench b;
  auto& left = b.add(1, -150);
  b.add(2, 0);
  auto& right = b.add(3, 150);
  for (int i = 0; i < 30; ++i) {
    left.mac.csma_send(data_to(2));
    right.mac.csma_send(data_to(2));
  }
  b.sched.run_until(SimTime::seconds(10));
  CHECK(left.done.size() == 30);
  CHECK(right.done.size() == 30);
  for (const auto& r : b.rows(TraceKind::Rx, std::nullopt, NodeId{1})) CHECK(r.src != 3);
  for (const auto& r : b.rows(TraceKind::Rx, std::nullopt, NodeId{3})) CHECK(r.src != 1);
}

TEST_CASE("a sleeping radio receives nothing") {
  Bench b;
  auto& a = b.add(1, 0);
  auto& c = b.add(2, 5);
  b.channel.set_sleeping(2, true);
  a.mac.csma_send(data_to(2));
  b.sched.run_until(SimTime::seconds(1));
  CHECK(c.received.empty());
  REQUIRE(a.done.size() == 1);
  CHECK(a.done[0].second == TxOutcome::NoAck);
}

TEST_CASE("a beacon due mid-transmission goes out anyway and collides") {
  Bench b;
  b.add_raw(1, 0);
  auto& c = b.add(2, 10);
  auto& r = b.add(3, 5);
  Frame f = data_to(3, 100);
  f.src = 1;
  f.pan_id = 0x1A2B;
  b.channel.transmit(1, f);
  b.sched.schedule(SimTime::micros(500), EventKind::BeaconDue, 2, [&] {
    Frame beacon;
    beacon.kind = FrameKind::Beacon;
    beacon.dst = kBroadcast;
    c.mac.send_immediate(beacon);
  });
  b.sched.run_until(SimTime::millis(20));
  const auto beacon_tx = b.rows(TraceKind::TxStart, FrameKind::Beacon, NodeId{2});
  REQUIRE(beacon_tx.size() == 1);
  CHECK(beacon_tx[0].time_us == 500);
  CHECK(r.received.empty());
  CHECK(b.rows(TraceKind::RxCollision, std::nullopt, NodeId{3}).size() == 2);
}

TEST_CASE("an interferer out of range of the listener is ignored") {
  Bench b;
  // Listener 2 at 0 hears sender 1 at 50 m; interferer 3 at 400 m reaches
  // neither of them.
  b.add_raw(1, 50);
  auto& listener = b.add(2, 0);
  b.add_raw(3, 400);
  Frame f1 = data_to(2);
  f1.src = 1;
  f1.pan_id = 0x1A2B;
  Frame noise = data_to(1);
  noise.src = 3;
  noise.pan_id = 0x1A2B;
  b.channel.transmit(1, f1);
  b.channel.transmit(3, noise);
  b.sched.run_until(SimTime::millis(10));
  REQUIRE(listener.received.size() == 1);
  CHECK(listener.received[0].src == 1);
  CHECK(b.rows(TraceKind::RxCollision).empty());
}

TEST_CASE("beacon order 15 sends no beacons") {
  ScenarioConfig cfg = default_scenario();
  cfg.beacon_order = BeaconOrder{15};
  cfg.duration = SimTime::seconds(2);
  const RunResult res = run_simulation(cfg, 1);
  for (const auto& r : res.trace) {
    CHECK(r.frame_kind != FrameKind::Beacon);
  }
}

TEST_CASE("beacon order 0 beacons every 15.36 ms") {
  ScenarioConfig cfg = default_scenario();
  cfg.beacon_order = BeaconOrder{0};
  cfg.duration = SimTime::seconds(1);
  const RunResult res = run_simulation(cfg, 1);
  for (const NodeConfig* parent : cfg.stationary_parents()) {
    std::vector<std::int64_t> times;
    for (const auto& r : res.trace) {
      if (r.node_id != parent->id || r.frame_kind != FrameKind::Beacon) continue;
      if (r.kind == TraceKind::TxStart || r.kind == TraceKind::BeaconSkipped) times.push_back(r.time_us);
    }
    const auto expected = (1'000'000 - parent->beacon_offset.us() + 15'359) / 15'360;
    CHECK(static_cast<std::int64_t>(times.size()) == expected);
    for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] - times[i - 1] == 15'360);
  }
}

}
