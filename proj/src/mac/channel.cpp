#include "zbsim/mac/channel.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace zbsim {

Channel::Channel(Scheduler& scheduler, Band band, TraceLog& trace)
    : scheduler_(scheduler), band_(band), trace_(trace) {}

void Channel::attach(NodeId id, PhyParams phy, std::function<Position()> position, Listener* listener,
                     EnergyLedger* ledger) {
  if (index_.contains(id)) throw std::invalid_argument(fmt::format("node {} attached twice", id));
  index_.emplace(id, radios_.size());
  radios_.push_back(Radio{id, phy, std::move(position), listener, ledger});
  radios_.back().tx_power = phy.tx_power_dbm;
}

std::size_t Channel::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range(fmt::format("node {} is not attached to the channel", id));
  return it->second;
}

int Channel::phy_overhead(NodeId node) const { return radios_[index_of(node)].phy.phy_overhead_bytes; }

bool Channel::cca_busy(NodeId node) const { return radios_[index_of(node)].audible_active > 0; }

bool Channel::is_sleeping(NodeId node) const { return radios_[index_of(node)].sleeping; }

bool Channel::is_transmitting(NodeId node) const { return radios_[index_of(node)].transmitting; }

RadioMode Channel::mode(NodeId node) const {
  const Radio& r = radios_[index_of(node)];
  if (r.transmitting) return RadioMode::Tx;
  if (r.sleeping) return RadioMode::Sleep;
  return r.audible_active > 0 ? RadioMode::Rx : RadioMode::Idle;
}

void Channel::refresh_mode(Radio& radio) {
  if (radio.ledger == nullptr) return;
  const RadioMode next = mode(radio.id);
  const double power = next == RadioMode::Tx ? radio.tx_power : 0.0;
  if (next != radio.ledger->mode() || power != radio.ledger->tx_power_dbm()) {
    radio.ledger->accrue(next, power, scheduler_.now());
  }
}

void Channel::abort_receptions(std::size_t radio_index) {
  for (auto& tx : active_) tx.rx[radio_index].eligible = false;
}

void Channel::set_sleeping(NodeId node, bool sleeping) {
  const std::size_t i = index_of(node);
  Radio& r = radios_[i];
  if (r.sleeping == sleeping) return;
  if (sleeping && r.transmitting) {
    throw std::logic_error(fmt::format("node {} cannot sleep while transmitting", node));
  }
  r.sleeping = sleeping;
  if (sleeping) abort_receptions(i);
  refresh_mode(r);
}

SimTime Channel::transmit(NodeId src, const Frame& frame) {
  const std::size_t s = index_of(src);
  Radio& sender = radios_[s];
  if (sender.sleeping || sender.transmitting) {
    throw std::logic_error(fmt::format("node {} cannot transmit while {}", src,
                                       sender.sleeping ? "asleep" : "already transmitting"));
  }
  const SimTime now = scheduler_.now();
  const SimTime airtime = frame_airtime(mac_frame_bytes(frame) + sender.phy.phy_overhead_bytes, band_);

  Active tx{next_tx_id_++, s, frame, now, now + airtime, sender.position(), {}, {}};
  tx.rx.resize(radios_.size());
  tx.rx_positions.resize(radios_.size());

  sender.transmitting = true;
  sender.tx_power = frame.tx_power_dbm;
  abort_receptions(s);

  const RadioEndpoint from{tx.src_position, &sender.phy};
  for (std::size_t r = 0; r < radios_.size(); ++r) {
    if (r == s) continue;
    Radio& rx_radio = radios_[r];
    tx.rx_positions[r] = rx_radio.position();
    const RadioEndpoint to{tx.rx_positions[r], &rx_radio.phy};
    Reception& rec = tx.rx[r];
    rec.rx_power = link_rx_power(from, to, frame.tx_power_dbm);
    rec.audible = rec.rx_power > rx_radio.phy.rx_sensitivity_dbm;
    if (!rec.audible) continue;
    if (rx_radio.audible_active > 0) {
      rec.collided = true;
      for (auto& other : active_) {
        if (other.rx[r].audible) other.rx[r].collided = true;
      }
    }
    rec.eligible = !rx_radio.sleeping && !rx_radio.transmitting;
    ++rx_radio.audible_active;
  }

  TraceRecord row = frame_row(now, src, TraceKind::TxStart, frame);
  row.power_dbm = frame.tx_power_dbm;
  row.pos_x_m = tx.src_position.x;
  trace_.emit(std::move(row));

  const std::uint64_t id = tx.id;
  active_.push_back(std::move(tx));
  for (auto& radio : radios_) refresh_mode(radio);

  scheduler_.schedule(now + airtime, EventKind::TxEnd, src, [this, id] { finish(id); });
  return airtime;
}

void Channel::finish(std::uint64_t tx_id) {
  auto it = std::find_if(active_.begin(), active_.end(), [tx_id](const Active& a) { return a.id == tx_id; });
  Active tx = std::move(*it);
  active_.erase(it);

  Radio& sender = radios_[tx.src];
  sender.transmitting = false;
  for (std::size_t r = 0; r < radios_.size(); ++r) {
    if (tx.rx[r].audible) --radios_[r].audible_active;
  }
  for (auto& radio : radios_) refresh_mode(radio);

  const SimTime now = scheduler_.now();
  TransmissionRecord record;
  if (keep_history_) {
    record.frame = tx.frame;
    record.src_position = tx.src_position;
    record.start = tx.start;
    record.end = tx.end;
  }

  if (sender.listener != nullptr) sender.listener->on_transmit_end(tx.frame);

  for (std::size_t r = 0; r < radios_.size(); ++r) {
    if (r == tx.src) continue;
    const Reception& rec = tx.rx[r];
    Radio& rx_radio = radios_[r];
    // Sleep or own transmission after the start also invalidates the frame.
    const bool delivered = rec.audible && rec.eligible && !rec.collided;
    if (keep_history_) {
      record.receivers.push_back(ReceiverSnapshot{rx_radio.id, tx.rx_positions[r], rec.rx_power, rec.audible,
                                                  rec.eligible, rec.collided, delivered});
    }
    if (!rec.audible || !rec.eligible) continue;
    const int lq = lq_from_rx_power(rec.rx_power, rx_radio.phy);
    TraceRecord row = frame_row(now, rx_radio.id, delivered ? TraceKind::Rx : TraceKind::RxCollision, tx.frame);
    row.power_dbm = tx.frame.tx_power_dbm;
    row.rx_power_dbm = rec.rx_power;
    row.lq = lq;
    row.pos_x_m = tx.rx_positions[r].x;
    trace_.emit(std::move(row));
    if (delivered && rx_radio.listener != nullptr) {
      rx_radio.listener->on_frame_received(tx.frame, LinkSample{rec.rx_power, lq, now, tx.frame.src,
                                                                tx.frame.tx_power_dbm});
    }
  }
  if (keep_history_) history_.push_back(std::move(record));
}

}  // namespace zbsim
