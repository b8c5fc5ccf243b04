#include "wavewall/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "wavewall/config.hpp"
#include "wavewall/control_loop.hpp"
#include "wavewall/error.hpp"
#include "wavewall/pipeline.hpp"
#include "wavewall/protocol.hpp"
#include "wavewall/simulator.hpp"
#include "wavewall/telemetry_server.hpp"
#include "wavewall/transport.hpp"

namespace wavewall {
namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

void install_signal_handlers() {
  g_stop = false;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
}

RuntimeConfig resolve_config(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("WAVEWALL_CONFIG")) path = env;
  }
  return path.empty() ? default_config() : load_config_file(path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

std::vector<std::uint8_t> parse_hex(std::string hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex = hex.substr(2);
  if (hex.size() % 2 != 0) throw InvalidInput("hex string must have an even number of digits");
  std::vector<std::uint8_t> bytes;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    unsigned value = 0;
    for (const char c : hex.substr(i, 2)) {
      value <<= 4;
      if (c >= '0' && c <= '9') value |= static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') value |= static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') value |= static_cast<unsigned>(c - 'A' + 10);
      else throw InvalidInput(std::string("not a hex digit: '") + c + "'");
    }
    bytes.push_back(static_cast<std::uint8_t>(value));
  }
  return bytes;
}

std::string hex_byte(std::uint8_t b) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "0x%02X", b);
  return buf;
}

std::unique_ptr<runtime::FrameSource> make_frames(const std::string& dir, double fps) {
  if (dir.empty()) return std::make_unique<runtime::NullFrameSource>();
  return std::make_unique<runtime::PgmDirectorySource>(dir, fps);
}

void print_stats(std::ostream& out, const runtime::LoopStats& s) {
  out << "ticks " << s.ticks << ", set_targets " << s.set_targets_sent << ", heartbeats " << s.heartbeats_sent
      << ", send failures " << s.send_failures << ", frames " << s.frames_received << ", acks " << s.acks_received
      << ", failsafe reports " << s.failsafe_reports << "\n";
}

struct Options {
  std::string config;
  std::string frames;
  double fps = 30.0;
  std::int64_t ticks = 0;
  std::string trace;
  std::string scenario;
  std::string input_trace;
  bool fast = false;
  int servo = 0;
  int step = 10;
  std::string hex;
  std::string bind;
  std::string static_dir;
  bool virtual_mode = false;
};

int cmd_run(const Options& o, std::ostream& out) {
  const auto cfg = resolve_config(o.config);
  auto frames = make_frames(o.frames, o.fps);
  runtime::SteadyClock clock;
  Pipeline probe(cfg);
  auto transport = runtime::make_transport(cfg, probe.rest_pulses(), clock.now_ms());
  runtime::ControlChannel control;
  std::vector<sim::TraceRow> rows;
  runtime::LoopHooks hooks;
  if (!o.trace.empty()) hooks.on_row = [&](const sim::TraceRow& r) { rows.push_back(r); };
  runtime::LoopOptions opts;
  if (o.ticks > 0) opts.max_ticks = static_cast<std::uint64_t>(o.ticks);
  install_signal_handlers();
  out << "running at " << cfg.tick_hz << " Hz over " << transport->describe() << "\n" << std::flush;
  const auto stats = runtime::control_loop(cfg, *frames, *transport, control, clock, g_stop, hooks, opts);
  if (!o.trace.empty()) write_file(o.trace, sim::export_trace(rows));
  print_stats(out, stats);
  return 0;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  auto cfg = resolve_config(o.config);
  if (!o.bind.empty()) cfg.telemetry.bind = o.bind;
  if (!o.static_dir.empty()) cfg.telemetry.static_dir = o.static_dir;
  validate(cfg);
  auto frames = make_frames(o.frames, o.fps);
  runtime::SteadyClock clock;
  Pipeline probe(cfg);
  auto transport = runtime::make_transport(cfg, probe.rest_pulses(), clock.now_ms());
  runtime::ControlChannel control;
  runtime::TelemetryServer server(cfg.telemetry.bind, cfg.telemetry.static_dir, control);
  server.start();
  out << "telemetry on ws://" << cfg.telemetry.bind.substr(0, cfg.telemetry.bind.rfind(':')) << ":" << server.port()
      << "/ws\n"
      << std::flush;

  runtime::LoopHooks hooks;
  const int every = cfg.telemetry.publish_every;
  hooks.on_snapshot = [&](std::shared_ptr<const runtime::TelemetrySnapshot> s) {
    if (s->tick % static_cast<std::uint64_t>(every) == 0) server.publish(std::move(s));
  };
  hooks.on_control_error = [&](const std::string& what) { err << "control message rejected: " << what << "\n"; };
  runtime::LoopOptions opts;
  opts.initial_mode = (o.virtual_mode || o.frames.empty()) ? runtime::Mode::Virtual : runtime::Mode::Live;
  if (o.ticks > 0) opts.max_ticks = static_cast<std::uint64_t>(o.ticks);
  install_signal_handlers();
  const auto stats = runtime::control_loop(cfg, *frames, *transport, control, clock, g_stop, hooks, opts);
  server.stop();
  print_stats(out, stats);
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto cfg = resolve_config(o.config);
  const auto scenario = sim::load_scenario(o.scenario);
  const auto rows = sim::run_scenario(scenario, cfg);
  const auto csv = sim::export_trace(rows);
  if (o.trace.empty()) {
    out << csv;
  } else {
    write_file(o.trace, csv);
    out << "simulated " << rows.size() << " ticks (" << scenario.duration_s << " s) -> " << o.trace << "\n";
  }
  return 0;
}

int cmd_replay(const Options& o, std::ostream& out) {
  const auto cfg = resolve_config(o.config);
  const auto rows = sim::parse_trace(read_file(o.input_trace));
  Pipeline pipeline(cfg);
  std::unique_ptr<runtime::Clock> clock;
  if (o.fast) clock = std::make_unique<runtime::SimulatedClock>();
  else clock = std::make_unique<runtime::SteadyClock>();
  auto transport = runtime::make_transport(cfg, pipeline.rest_pulses(), clock->now_ms());
  protocol::StreamDecoder replies;
  std::size_t acks = 0;
  std::uint8_t seq = 0;
  const std::int64_t start = clock->now_ms();
  std::uint64_t k = 0;
  for (const auto& row : rows) {
    if (row.angles.size() != cfg.servos.size()) {
      throw InvalidInput("trace has " + std::to_string(row.angles.size()) + " angles but config has " +
                         std::to_string(cfg.servos.size()) + " servos");
    }
    std::vector<std::uint16_t> pulses;
    for (std::size_t i = 0; i < row.angles.size(); ++i) {
      const auto& s = cfg.servos[i];
      // Trace angles carry 6 decimals; pin them back into the calibrated window.
      pulses.push_back(actuation::angle_to_pulse(std::clamp(row.angles[i], s.angle_min, s.angle_max), s));
    }
    const std::int64_t now = start + tick_time_ms(k++, cfg.tick_hz);
    clock->sleep_until_ms(now);
    transport->send(protocol::encode(protocol::set_targets(seq++, pulses)), now);
    for (const auto& m : replies.push(transport->receive(now))) acks += m.type == protocol::MsgType::Ack ? 1 : 0;
    if (g_stop) break;
  }
  const std::int64_t end = start + tick_time_ms(k, cfg.tick_hz);
  transport->send(protocol::encode(pipeline.rest_message()), end);
  out << "replayed " << k << " frames over " << transport->describe() << ", acks " << acks << "\n";
  return 0;
}

int cmd_calibrate(const Options& o, std::istream& in, std::ostream& out) {
  const auto cfg = resolve_config(o.config);
  if (o.servo < 0 || o.servo >= cfg.m_panels) {
    throw InvalidInput("servo index must lie in [0, " + std::to_string(cfg.m_panels) + ")");
  }
  Pipeline pipeline(cfg);
  const auto rest = pipeline.rest_pulses();
  runtime::SteadyClock clock;
  auto transport = runtime::make_transport(cfg, rest, clock.now_ms());
  const auto idx = static_cast<std::size_t>(o.servo);

  std::mutex mu;
  std::vector<std::uint16_t> pulses = rest;
  std::uint8_t seq = 0;
  const auto push = [&] {
    std::lock_guard lock(mu);
    const auto now = clock.now_ms();
    transport->send(protocol::encode(protocol::set_targets(seq++, pulses)), now);
    transport->receive(now);
  };
  // Keep the device watchdog fed while waiting on the operator.
  std::atomic<bool> done{false};
  std::thread keepalive([&] {
    while (!done) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
      if (!done) push();
    }
  });

  int pulse = rest[idx];
  std::optional<int> lo;
  std::optional<int> hi;
  const auto set_pulse = [&](int p) {
    pulse = std::clamp(p, actuation::kPulseFloorUs, actuation::kPulseCeilUs);
    {
      std::lock_guard lock(mu);
      pulses[idx] = static_cast<std::uint16_t>(pulse);
    }
    push();
    out << "servo " << o.servo << " pulse " << pulse << " us\n" << std::flush;
  };

  out << "calibrating servo " << o.servo << "; commands: + - ++ -- <us> min max show done\n";
  set_pulse(pulse);
  std::string cmd;
  while (in >> cmd) {
    if (cmd == "+") set_pulse(pulse + o.step);
    else if (cmd == "-") set_pulse(pulse - o.step);
    else if (cmd == "++") set_pulse(pulse + 10 * o.step);
    else if (cmd == "--") set_pulse(pulse - 10 * o.step);
    else if (cmd == "min") { lo = pulse; out << "pulse_min = " << pulse << "\n"; }
    else if (cmd == "max") { hi = pulse; out << "pulse_max = " << pulse << "\n"; }
    else if (cmd == "show") out << "pulse " << pulse << " us\n";
    else if (cmd == "done" || cmd == "q") break;
    else if (!cmd.empty() && std::isdigit(static_cast<unsigned char>(cmd[0]))) set_pulse(std::stoi(cmd));
    else out << "unknown command '" << cmd << "'\n";
  }
  done = true;
  keepalive.join();
  {
    std::lock_guard lock(mu);
    pulses = rest;
  }
  push();

  const auto& s = cfg.servos[idx];
  out << "# servos[" << o.servo << "]\n"
      << "- angle_min: " << s.angle_min << "\n"
      << "  angle_max: " << s.angle_max << "\n"
      << "  pulse_min: " << lo.value_or(s.pulse_min) << "\n"
      << "  pulse_max: " << hi.value_or(s.pulse_max) << "\n"
      << "  inverted: " << (s.inverted ? "true" : "false") << "\n";
  return 0;
}

int cmd_crc(const Options& o, std::ostream& out) {
  out << hex_byte(protocol::crc8(parse_hex(o.hex))) << "\n";
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Host controller, simulator and debug tools for the kinetic wave installation", "wavewall"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "Runtime config file (default: $WAVEWALL_CONFIG or built-in defaults)");

  auto* run = app.add_subcommand("run", "Run the live control loop");
  run->add_option("--frames", o.frames, "Directory of .pgm frames to replay as the camera");
  run->add_option("--fps", o.fps, "Frame rate for --frames")->check(CLI::PositiveNumber);
  run->add_option("--ticks", o.ticks, "Stop after this many ticks (default: until SIGINT)");
  run->add_option("--trace", o.trace, "Write a CSV trace on exit");

  auto* simulate = app.add_subcommand("simulate", "Run a scenario through the full pipeline");
  simulate->add_option("scenario", o.scenario, "Scenario file")->required();
  simulate->add_option("--trace", o.trace, "Output CSV (default: stdout)");

  auto* replay = app.add_subcommand("replay", "Re-send the angles recorded in a trace");
  replay->add_option("trace", o.input_trace, "Trace CSV")->required();
  replay->add_flag("--fast", o.fast, "Do not pace frames in real time");

  auto* calibrate = app.add_subcommand("calibrate", "Step one servo's pulse width interactively");
  calibrate->add_option("servo", o.servo, "Servo index")->required();
  calibrate->add_option("--step", o.step, "Pulse step in microseconds")->check(CLI::Range(1, 500));

  auto* crc = app.add_subcommand("crc", "Print the CRC-8 of a hex byte string");
  crc->add_option("hex", o.hex, "Bytes as hex, e.g. 010104DC05DC05")->required();

  auto* serve = app.add_subcommand("serve", "Run the control loop with the telemetry server");
  serve->add_option("--frames", o.frames, "Directory of .pgm frames to replay as the camera");
  serve->add_option("--fps", o.fps, "Frame rate for --frames")->check(CLI::PositiveNumber);
  serve->add_option("--ticks", o.ticks, "Stop after this many ticks (default: until SIGINT)");
  serve->add_option("--bind", o.bind, "host:port to listen on");
  serve->add_option("--static", o.static_dir, "Directory of console assets");
  serve->add_flag("--virtual", o.virtual_mode, "Start in virtual-visitor mode");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*run) return cmd_run(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*replay) return cmd_replay(o, out);
    if (*calibrate) return cmd_calibrate(o, in, out);
    if (*crc) return cmd_crc(o, out);
    if (*serve) return cmd_serve(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace wavewall
