#include "wavewall/protocol.hpp"

#include <array>

#include "wavewall/actuation.hpp"
#include "wavewall/error.hpp"

namespace wavewall::protocol {
namespace {

constexpr std::array<std::uint8_t, 256> make_crc_table() {
  std::array<std::uint8_t, 256> table{};
  for (int i = 0; i < 256; ++i) {
    auto crc = static_cast<std::uint8_t>(i);
    for (int bit = 0; bit < 8; ++bit) {
      crc = static_cast<std::uint8_t>((crc & 0x80) ? (crc << 1) ^ 0x07 : crc << 1);
    }
    table[static_cast<std::size_t>(i)] = crc;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

// Structural rules beyond the CRC. Used both when encoding and to reject
// CRC-valid garbage found while resynchronizing.
bool payload_shape_ok(MsgType type, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxPayload) return false;
  if (type == MsgType::SetTargets) {
    if (payload.empty() || payload.size() % 2 != 0) return false;
    for (std::size_t i = 0; i < payload.size(); i += 2) {
      const int us = payload[i] | (payload[i + 1] << 8);
      if (us < actuation::kPulseFloorUs || us > actuation::kPulseCeilUs) return false;
    }
    return true;
  }
  return payload.size() <= 1;
}

bool header_plausible(std::uint8_t type, std::uint8_t len) {
  if (!is_known_type(type) || len > kMaxPayload) return false;
  if (static_cast<MsgType>(type) == MsgType::SetTargets) return len > 0 && len % 2 == 0;
  return len <= 1;
}

}  // namespace

bool is_known_type(std::uint8_t raw) noexcept {
  switch (static_cast<MsgType>(raw)) {
    case MsgType::SetTargets:
    case MsgType::Heartbeat:
    case MsgType::Ack:
    case MsgType::FailsafeTriggered:
      return true;
  }
  return false;
}

std::uint8_t crc8(std::span<const std::uint8_t> data) noexcept {
  std::uint8_t crc = 0x00;
  for (const std::uint8_t b : data) crc = kCrcTable[crc ^ b];
  return crc;
}

std::vector<std::uint8_t> encode(MsgType type, std::uint8_t seq, std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxPayload) throw InvalidInput("payload exceeds 64 bytes");
  if (!payload_shape_ok(type, payload)) throw InvalidInput("payload does not match message type");
  std::vector<std::uint8_t> out;
  out.reserve(kOverhead + payload.size());
  out.push_back(kSync);
  out.push_back(static_cast<std::uint8_t>(type));
  out.push_back(seq);
  out.push_back(static_cast<std::uint8_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  out.push_back(crc8(std::span(out).subspan(1)));
  return out;
}

std::vector<std::uint8_t> encode(const Message& msg) { return encode(msg.type, msg.seq, msg.payload); }

std::vector<std::uint8_t> pack_pulses(std::span<const std::uint16_t> pulses) {
  std::vector<std::uint8_t> out;
  out.reserve(pulses.size() * 2);
  for (const std::uint16_t us : pulses) {
    out.push_back(static_cast<std::uint8_t>(us & 0xFF));
    out.push_back(static_cast<std::uint8_t>(us >> 8));
  }
  return out;
}

std::vector<std::uint16_t> unpack_pulses(std::span<const std::uint8_t> payload) {
  if (payload.size() % 2 != 0) throw InvalidInput("pulse payload must have even length");
  std::vector<std::uint16_t> out;
  out.reserve(payload.size() / 2);
  for (std::size_t i = 0; i < payload.size(); i += 2) {
    out.push_back(static_cast<std::uint16_t>(payload[i] | (payload[i + 1] << 8)));
  }
  return out;
}

Message set_targets(std::uint8_t seq, std::span<const std::uint16_t> pulses) {
  return Message{MsgType::SetTargets, seq, pack_pulses(pulses)};
}

Message heartbeat(std::uint8_t seq) { return Message{MsgType::Heartbeat, seq, {}}; }

DecodeResult decode(std::span<const std::uint8_t> stream) {
  DecodeResult result;
  std::size_t pos = 0;
  const std::size_t n = stream.size();
  while (pos < n) {
    if (stream[pos] != kSync) {
      ++pos;
      ++result.errors_skipped;
      continue;
    }
    const std::size_t avail = n - pos;
    // Judge whatever header bytes are present; stop only on a plausible prefix.
    if (avail >= 2 && !is_known_type(stream[pos + 1])) {
      ++pos;
      ++result.errors_skipped;
      continue;
    }
    if (avail >= kHeaderSize && !header_plausible(stream[pos + 1], stream[pos + 3])) {
      ++pos;
      ++result.errors_skipped;
      continue;
    }
    if (avail < kHeaderSize) break;
    const std::size_t len = stream[pos + 3];
    if (avail < kOverhead + len) break;

    const auto body = stream.subspan(pos + 1, kHeaderSize - 1 + len);
    const auto type = static_cast<MsgType>(stream[pos + 1]);
    const auto payload = stream.subspan(pos + kHeaderSize, len);
    if (crc8(body) != stream[pos + kHeaderSize + len] || !payload_shape_ok(type, payload)) {
      ++pos;
      ++result.errors_skipped;
      continue;
    }
    result.messages.push_back(Message{type, stream[pos + 2], {payload.begin(), payload.end()}});
    pos += kOverhead + len;
  }
  result.consumed = pos;
  return result;
}

std::vector<Message> StreamDecoder::push(std::span<const std::uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  auto result = decode(buffer_);
  errors_skipped_ += result.errors_skipped;
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(result.consumed));
  return std::move(result.messages);
}

}  // namespace wavewall::protocol
