#include <doctest.h>

#include <random>

#include "wavewall/device.hpp"
#include "wavewall/error.hpp"

using namespace wavewall;
using namespace wavewall::protocol;

namespace {

const std::vector<std::uint16_t> kRest{1000, 1000, 1000, 1000};

std::vector<Message> replies(const DeviceStep& s) { return decode(s.tx).messages; }

std::size_t count_type(const std::vector<Message>& msgs, MsgType t) {
  return static_cast<std::size_t>(std::count_if(msgs.begin(), msgs.end(), [&](const Message& m) { return m.type == t; }));
}

}  // namespace

TEST_CASE("set targets applies pulses and is acknowledged") {
  auto dev = DeviceModel::boot(kRest, 0);
  const std::vector<std::uint16_t> target{1500, 1600, 1700, 1800};
  auto s = device_step(std::move(dev), encode(set_targets(42, target)), 10);
  CHECK(s.model.current_pulses == target);
  const auto out = replies(s);
  REQUIRE(out.size() == 1);
  CHECK(out[0].type == MsgType::Ack);
  CHECK(out[0].seq == 42);
  CHECK(out[0].payload == std::vector<std::uint8_t>{42});
}

TEST_CASE("wrong servo count is ignored") {
  const std::vector<std::uint16_t> target{1500, 1600};
  auto s = device_step(DeviceModel::boot(kRest, 0), encode(set_targets(1, target)), 10);
  CHECK(s.model.current_pulses == kRest);
  CHECK(s.tx.empty());
}

TEST_CASE("silence longer than the timeout drops to rest exactly once") {
  auto s = device_step(DeviceModel::boot(kRest, 0), encode(set_targets(0, std::vector<std::uint16_t>{2000, 2000, 2000, 2000})), 0);
  s = device_step(std::move(s.model), {}, 500);
  CHECK_FALSE(s.model.failsafe_engaged);  // exactly at the timeout is still fine
  s = device_step(std::move(s.model), {}, 600);
  CHECK(s.model.failsafe_engaged);
  CHECK(s.model.current_pulses == kRest);
  CHECK(count_type(replies(s), MsgType::FailsafeTriggered) == 1);
  for (std::int64_t t = 700; t < 5000; t += 100) {
    s = device_step(std::move(s.model), {}, t);
    CHECK(s.tx.empty());
  }
  CHECK(s.model.engagements == 1);

  // A heartbeat rearms; the next silence reports again.
  s = device_step(std::move(s.model), encode(heartbeat(1)), 5000);
  CHECK_FALSE(s.model.failsafe_engaged);
  s = device_step(std::move(s.model), {}, 5501);
  CHECK(s.model.failsafe_engaged);
  CHECK(count_type(replies(s), MsgType::FailsafeTriggered) == 1);
  CHECK(s.model.engagements == 2);
}

TEST_CASE("heartbeats alone keep the watchdog fed") {
  auto s = device_step(DeviceModel::boot(kRest, 0), {}, 0);
  for (std::int64_t t = 0; t <= 10000; t += 400) {
    s = device_step(std::move(s.model), encode(heartbeat(static_cast<std::uint8_t>(t / 400))), t);
    CHECK_FALSE(s.model.failsafe_engaged);
  }
}

TEST_CASE("corrupted frames do not feed the watchdog") {
  auto wire = encode(heartbeat(1));
  wire[3] ^= 0x40;
  auto s = device_step(DeviceModel::boot(kRest, 0), wire, 400);
  s = device_step(std::move(s.model), {}, 501);
  CHECK(s.model.failsafe_engaged);
}

TEST_CASE("random traffic matches a plain watchdog interpreter") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t timeout = std::uniform_int_distribution<int>(50, 800)(rng);
    auto s = device_step(DeviceModel::boot(kRest, 0, timeout), {}, 0);
    std::int64_t last_rx = 0;
    bool engaged = false;
    std::uint64_t reports = 0;
    std::int64_t t = 0;
    for (int k = 0; k < 400; ++k) {
      t += std::uniform_int_distribution<int>(0, 300)(rng);
      const bool send = std::uniform_int_distribution<int>(0, 2)(rng) == 0;
      s = device_step(std::move(s.model), send ? encode(heartbeat(0)) : std::vector<std::uint8_t>{}, t);
      if (send) {
        last_rx = t;
        engaged = false;
      }
      if (!engaged && t - last_rx > timeout) {
        engaged = true;
        ++reports;
      }
      REQUIRE(s.model.failsafe_engaged == engaged);
      REQUIRE(s.model.engagements == reports);
    }
  }
}

TEST_CASE("device time cannot go backwards") {
  auto s = device_step(DeviceModel::boot(kRest, 100), {}, 100);
  CHECK_THROWS_AS(device_step(std::move(s.model), {}, 99), InvalidInput);
}
