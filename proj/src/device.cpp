#include "wavewall/device.hpp"

#include "wavewall/error.hpp"

namespace wavewall::protocol {

DeviceModel DeviceModel::boot(std::vector<std::uint16_t> rest_pulses, std::int64_t now,
                              std::int64_t failsafe_timeout_ms) {
  if (failsafe_timeout_ms <= 0) throw InvalidInput("failsafe timeout must be positive");
  DeviceModel model;
  model.current_pulses = rest_pulses;
  model.rest_pulses = std::move(rest_pulses);
  model.last_valid_rx_ms = now;
  model.last_step_ms = now;
  model.failsafe_timeout_ms = failsafe_timeout_ms;
  return model;
}

DeviceStep device_step(DeviceModel model, std::span<const std::uint8_t> rx, std::int64_t now) {
  if (now < model.last_step_ms) throw InvalidInput("device time went backwards");
  model.last_step_ms = now;

  std::vector<std::uint8_t> tx;
  for (const Message& msg : model.rx.push(rx)) {
    switch (msg.type) {
      case MsgType::SetTargets: {
        auto pulses = unpack_pulses(msg.payload);
        if (pulses.size() != model.rest_pulses.size()) break;  // wrong servo count: not for us
        model.current_pulses = std::move(pulses);
        model.last_valid_rx_ms = now;
        model.failsafe_engaged = false;
        const std::uint8_t echo[] = {msg.seq};
        const auto ack = encode(MsgType::Ack, msg.seq, echo);
        tx.insert(tx.end(), ack.begin(), ack.end());
        ++model.acks_sent;
        break;
      }
      case MsgType::Heartbeat:
        model.last_valid_rx_ms = now;
        model.failsafe_engaged = false;
        break;
      case MsgType::Ack:
      case MsgType::FailsafeTriggered:
        break;  // device-to-host only
    }
  }

  if (!model.failsafe_engaged && now - model.last_valid_rx_ms > model.failsafe_timeout_ms) {
    model.failsafe_engaged = true;
    model.current_pulses = model.rest_pulses;
    ++model.engagements;
    const auto note = encode(MsgType::FailsafeTriggered, model.tx_seq++, {});
    tx.insert(tx.end(), note.begin(), note.end());
  }
  return DeviceStep{std::move(model), std::move(tx)};
}

}  // namespace wavewall::protocol
