#pragma once

// Host <-> servo controller framing:
//
//   0xAA | type | seq | len | payload[len] | crc8(type..payload)
//
// CRC-8 with polynomial 0x07, init 0x00, MSB first, no final xor.
// SET_TARGETS carries one little-endian u16 pulse width (us) per servo.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wavewall::protocol {

inline constexpr std::uint8_t kSync = 0xAA;
inline constexpr std::size_t kMaxPayload = 64;
inline constexpr std::size_t kHeaderSize = 4;  // sync, type, seq, len
inline constexpr std::size_t kOverhead = kHeaderSize + 1;

enum class MsgType : std::uint8_t {
  SetTargets = 0x01,
  Heartbeat = 0x02,
  Ack = 0x81,
  FailsafeTriggered = 0x82,
};

bool is_known_type(std::uint8_t raw) noexcept;

struct Message {
  MsgType type = MsgType::Heartbeat;
  std::uint8_t seq = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Message&, const Message&) = default;
};

std::uint8_t crc8(std::span<const std::uint8_t> data) noexcept;

/// Throws InvalidInput if the payload breaks the per-type length rules.
std::vector<std::uint8_t> encode(MsgType type, std::uint8_t seq, std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> encode(const Message& msg);

std::vector<std::uint8_t> pack_pulses(std::span<const std::uint16_t> pulses);
std::vector<std::uint16_t> unpack_pulses(std::span<const std::uint8_t> payload);

Message set_targets(std::uint8_t seq, std::span<const std::uint16_t> pulses);
Message heartbeat(std::uint8_t seq);

struct DecodeResult {
  std::vector<Message> messages;
  std::size_t consumed = 0;        // bytes the caller may drop
  std::size_t errors_skipped = 0;  // bytes discarded as garbage
};

/// Parses as many complete frames as the buffer holds. A byte that does not
/// start a valid frame is skipped and the scan resumes at the next 0xAA. A
/// plausible frame cut off at the end of the buffer is left unconsumed.
DecodeResult decode(std::span<const std::uint8_t> stream);

/// Incremental wrapper around `decode` that keeps the unconsumed tail.
class StreamDecoder {
 public:
  std::vector<Message> push(std::span<const std::uint8_t> bytes);

  std::size_t pending() const noexcept { return buffer_.size(); }
  std::size_t errors_skipped() const noexcept { return errors_skipped_; }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t errors_skipped_ = 0;
};

}  // namespace wavewall::protocol
