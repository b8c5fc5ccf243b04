// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "wavewall/device.hpp"
#include "wavewall/simulator.hpp"

using namespace wavewall;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const sim::TraceRow& row_at(const std::vector<sim::TraceRow>& rows, double t) {
  for (const auto& r : rows)
    if (std::fabs(r.t_s - t) < 1e-9) return r;
  throw std::runtime_error("no trace row at requested time");
}

bool strict_argmax(const std::vector<double>& v, std::size_t i) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != i && !(v[i] > v[j])) return false;
  return true;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict two_region_choreography() {
  const auto t0 = Clock::now();
  const auto rows = sim::run_scenario(sim::two_region_scenario(), default_config());
  const double elapsed = seconds_since(t0);
  const auto& at5 = row_at(rows, 5.0);
  const auto& at11 = row_at(rows, 11.0);
  const bool ok = strict_argmax(at5.base, 1) && strict_argmax(at11.base, 2) && at11.base[1] < at5.base[1] &&
                  elapsed < 5.0;
  return {ok, fmt("t=5 base=[%.4f %.4f %.4f %.4f], t=11 base=[%.4f %.4f %.4f %.4f], runtime %.3f s", at5.base[0],
                  at5.base[1], at5.base[2], at5.base[3], at11.base[0], at11.base[1], at11.base[2], at11.base[3],
                  elapsed)};
}

Verdict dwell_monotonicity() {
  const auto peak = [](double dwell) {
    double p = 0;
    for (const auto& r : sim::run_scenario(sim::dwell_scenario(1, dwell, 8.0), default_config()))
      p = std::max(p, r.base[1]);
    return p;
  };
  const double p2 = peak(2.0);
  const double p4 = peak(4.0);
  return {p4 > p2 && p4 < 1.0, fmt("peak 2 s = %.6f, peak 4 s = %.6f", p2, p4)};
}

Verdict bounds_and_safety() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Raw wave dynamics under random valid parameters and occupancy.
  std::size_t wave_violations = 0;
  {
    const double dt = 1.0 / 30;
    wave::WaveParams p;
    auto s = wave::WaveState::dormant(6);
    for (int k = 0; k < 10000; ++k) {
      if (k % 500 == 0) {
        p.rise_rate = 0.01 + 2.0 * u(rng);
        p.decay_rate = 2.0 * u(rng);
        p.coupling = u(rng) * 0.5 / dt;
        p.ripple_amplitude = u(rng);
      }
      const int pick = std::uniform_int_distribution<int>(-1, 5)(rng);
      s = wave::step_wave(s, pick < 0 ? std::nullopt : std::optional<int>(pick), dt, p);
      for (const double b : s.base) wave_violations += !(b >= 0.0 && b <= 1.0);
      for (const double h : wave::render_profile(s, 12, p)) wave_violations += !(h >= 0.0 && h <= 1.0);
    }
  }

  // Whole pipeline with a wandering visitor, an inverted servo and a fast slew limit.
  auto cfg = default_config();
  cfg.servos[3].inverted = true;
  cfg.servos[5] = {20.0, 60.0, 1200, 1800, false};
  cfg.actuator.max_speed = 90.0;
  sim::Scenario s;
  s.duration_s = 10000.0 / 30 - 1.0 / 30;
  for (double t = 0; t < s.duration_s; t += 0.5 + 3.0 * u(rng))
    s.events.push_back({t, u(rng) < 0.2 ? std::nullopt : std::optional<double>(u(rng))});
  const auto rows = sim::run_scenario(s, cfg);
  const double step = cfg.actuator.max_speed * cfg.dt();
  std::size_t angle_violations = 0;
  std::size_t slew_violations = 0;
  double worst_delta = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].angles.size(); ++j) {
      const double a = rows[i].angles[j];
      angle_violations += !(a >= cfg.servos[j].angle_min && a <= cfg.servos[j].angle_max);
      if (i > 0) {
        const double d = std::fabs(a - rows[i - 1].angles[j]);
        worst_delta = std::max(worst_delta, d);
        slew_violations += !(d <= step);
      }
    }
    for (const double b : rows[i].base) wave_violations += !(b >= 0.0 && b <= 1.0);
  }
  const bool ok = rows.size() == 10000 && wave_violations == 0 && angle_violations == 0 && slew_violations == 0;
  return {ok, fmt("%zu pipeline ticks; height violations %zu, angle violations %zu, slew violations %zu "
                  "(worst delta %.17g <= %.17g)",
                  rows.size(), wave_violations, angle_violations, slew_violations, worst_delta, step)};
}

Verdict vision_oracle() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> dim(vision::kMinFrameDim, 32);
  std::uniform_int_distribution<int> pix(0, 255);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    vision::Frame bg{w, h, {}, 0};
    vision::Frame f{w, h, {}, 0};
    // Mix of dense noise and sparse blobs so both small and large masks occur.
    const bool sparse = trial % 2 == 0;
    for (int i = 0; i < w * h; ++i) {
      const int b = pix(rng);
      bg.pixels.push_back(static_cast<std::uint8_t>(b));
      f.pixels.push_back(static_cast<std::uint8_t>(sparse && u(rng) < 0.9 ? b : pix(rng)));
    }
    const double threshold = 1.0 + 200.0 * u(rng);
    const double min_activity = 1e-4 + 0.2 * u(rng);
    // A partly adapted model gives non-integer means.
    const auto model = vision::update_background(vision::init_background(bg), f, 0.3 * u(rng));
    const auto obs = vision::detect_presence(model, f, threshold, min_activity);
    const std::vector<double> mean(model.mean().begin(), model.mean().end());
    const auto ref = oracle::brute_force_presence(mean, f.pixels, w, h, threshold);
    const bool ref_occupied = ref.count > 0 && ref.activity >= min_activity;
    double err = std::fabs(obs.activity_ratio - ref.activity);
    bool bad = err > 1e-9 || obs.occupied != ref_occupied;
    if (obs.occupied && ref_occupied) {
      const double ce = std::fabs(*obs.centroid_x - *ref.centroid);
      err = std::max(err, ce);
      bad = bad || ce > 1e-9;
    }
    if (obs.occupied != obs.centroid_x.has_value()) bad = true;
    worst = std::max(worst, err);
    mismatches += bad;
  }
  return {mismatches == 0, fmt("1000 cases, %d mismatches, worst abs error %.3g", mismatches, worst)};
}

protocol::Message random_message(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> byte(0, 255);
  const auto seq = static_cast<std::uint8_t>(byte(rng));
  switch (byte(rng) % 4) {
    case 0: {
      std::vector<std::uint16_t> pulses(std::uniform_int_distribution<int>(1, 32)(rng));
      for (auto& p : pulses) p = static_cast<std::uint16_t>(std::uniform_int_distribution<int>(500, 2500)(rng));
      return protocol::set_targets(seq, pulses);
    }
    case 1: return protocol::heartbeat(seq);
    case 2: return {protocol::MsgType::Ack, seq, {static_cast<std::uint8_t>(byte(rng))}};
    default: return {protocol::MsgType::FailsafeTriggered, seq, {}};
  }
}

Verdict protocol_fuzz() {
  std::mt19937_64 rng(4242);
  int round_trip_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto m = random_message(rng);
    const auto r = protocol::decode(protocol::encode(m));
    round_trip_failures += !(r.messages.size() == 1 && r.messages[0] == m);
  }

  int false_accepts = 0;
  int lost_followers = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = random_message(rng);
    const auto b = random_message(rng);
    auto bad = protocol::encode(a);
    const std::size_t at = std::uniform_int_distribution<std::size_t>(0, bad.size() - 1)(rng);
    bad[at] ^= static_cast<std::uint8_t>(std::uniform_int_distribution<int>(1, 255)(rng));
    const auto wb = protocol::encode(b);
    // Feed byte by byte, as a serial port would, so partial-frame handling is exercised too.
    protocol::StreamDecoder dec;
    std::vector<protocol::Message> got;
    for (const auto byte : bad)
      for (auto& m : dec.push(std::span(&byte, 1))) got.push_back(std::move(m));
    for (const auto byte : wb)
      for (auto& m : dec.push(std::span(&byte, 1))) got.push_back(std::move(m));
    // A corrupted length byte can leave the decoder waiting for a longer
    // frame; any further traffic flushes it.
    for (int k = 0; k < 14 && std::find(got.begin(), got.end(), b) == got.end(); ++k)
      for (auto& m : dec.push(protocol::encode(protocol::heartbeat(static_cast<std::uint8_t>(k))))) got.push_back(m);
    for (const auto& m : got) {
      const bool filler = m.type == protocol::MsgType::Heartbeat && m.payload.empty() && m.seq < 14 && !(m == b);
      if (!(m == b) && !filler) ++false_accepts;
    }
    lost_followers += std::find(got.begin(), got.end(), b) == got.end();
  }

  const std::string check = "123456789";
  const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(check.data()), check.size());
  const auto fast = protocol::crc8(bytes);
  const auto slow = oracle::crc8_bitwise(bytes);
  const bool ok = round_trip_failures == 0 && false_accepts == 0 && lost_followers == 0 && fast == slow && fast == 0xF4;
  return {ok, fmt("round-trip failures %d/10000, false accepts %d, unrecovered %d/10000, crc(\"123456789\") = 0x%02X "
                  "(bitwise 0x%02X)",
                  round_trip_failures, false_accepts, lost_followers, fast, slow)};
}

Verdict failsafe_timing() {
  const int hz = 30;
  const std::int64_t tick_ms = 1000 / hz + 1;  // longest gap between scheduled ticks
  const std::vector<std::uint16_t> rest(8, 1000);
  auto dev = protocol::DeviceModel::boot(rest, 0);
  std::mt19937_64 rng(9);
  int late = 0, early = 0, bad_reports = 0, engagements = 0;
  std::uint64_t k = 0;
  std::int64_t last_rx = 0;
  for (int cycle = 0; cycle < 50; ++cycle) {
    // Talk for a while, then go silent for 0.6 - 3 s.
    const int talk = std::uniform_int_distribution<int>(1, 60)(rng);
    for (int i = 0; i < talk; ++i, ++k) {
      const auto now = tick_time_ms(k, hz);
      auto s = protocol::device_step(std::move(dev), protocol::encode(protocol::heartbeat(static_cast<std::uint8_t>(k))), now);
      dev = std::move(s.model);
      last_rx = now;
      bad_reports += !protocol::decode(s.tx).messages.empty();
    }
    const int silent = std::uniform_int_distribution<int>(18, 90)(rng);
    int reports = 0;
    std::optional<std::int64_t> engaged_at;
    for (int i = 0; i < silent; ++i, ++k) {
      const auto now = tick_time_ms(k, hz);
      auto s = protocol::device_step(std::move(dev), {}, now);
      dev = std::move(s.model);
      for (const auto& m : protocol::decode(s.tx).messages) reports += m.type == protocol::MsgType::FailsafeTriggered;
      if (dev.failsafe_engaged && !engaged_at) engaged_at = now;
      if (dev.failsafe_engaged && dev.current_pulses != rest) ++bad_reports;
    }
    const std::int64_t silent_until = tick_time_ms(k - 1, hz);
    if (silent_until - last_rx > 500 + tick_ms) {
      ++engagements;
      if (!engaged_at || *engaged_at - last_rx > 500 + tick_ms) ++late;
      if (engaged_at && *engaged_at - last_rx <= 500) ++early;
      bad_reports += reports != 1;
    } else if (engaged_at && *engaged_at - last_rx <= 500) {
      ++early;
    }
  }
  const bool ok = late == 0 && early == 0 && bad_reports == 0 && engagements > 0;
  return {ok, fmt("%d silences long enough to engage; late %d, early %d, report/rest errors %d", engagements, late,
                  early, bad_reports)};
}

Verdict determinism() {
  auto s = sim::two_region_scenario();
  s.seed = 31337;
  s.noise_amplitude = 10;
  const auto a = sim::export_trace(sim::run_scenario(s, default_config()));
  const auto b = sim::export_trace(sim::run_scenario(s, default_config()));
  const auto c = sim::export_trace(sim::run_scenario(sim::two_region_scenario(), default_config()));
  const auto d = sim::export_trace(sim::run_scenario(sim::two_region_scenario(), default_config()));
  return {a == b && c == d, fmt("noisy traces %zu bytes identical: %s; clean traces identical: %s", a.size(),
                                a == b ? "yes" : "no", c == d ? "yes" : "no")};
}

Verdict throughput() {
  sim::Scenario s;
  s.duration_s = 100.0;  // 3001 ticks
  s.seed = 1;
  s.noise_amplitude = 5;
  for (int i = 0; i < 20; ++i) s.events.push_back({i * 5.0, (i % 4 + 0.5) / 4.0});
  const auto cfg = default_config();
  sim::run_scenario(s, cfg);  // warm-up
  const auto t0 = Clock::now();
  const auto rows = sim::run_scenario(s, cfg);
  const double elapsed = seconds_since(t0);
  const double rate = static_cast<double>(rows.size()) / elapsed;
  return {rate >= 300.0, fmt("%zu ticks of %dx%d in %.3f s = %.0f ticks/s (kernels: %s)", rows.size(),
                             cfg.vision.frame_width, cfg.vision.frame_height, elapsed, rate,
                             std::string(kernels::isa_name(kernels::active_kernels().isa)).c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"two-region choreography", two_region_choreography},
      {"dwell monotonicity", dwell_monotonicity},
      {"bounds and safety sweep", bounds_and_safety},
      {"vision oracle equivalence", vision_oracle},
      {"protocol fuzz", protocol_fuzz},
      {"failsafe timing", failsafe_timing},
      {"determinism", determinism},
      {"desk-scale throughput", throughput},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s  %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
