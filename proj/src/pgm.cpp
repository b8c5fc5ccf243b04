#include "wavewall/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>

#include "wavewall/error.hpp"

namespace wavewall::vision {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int next_int(const char* what) {
    skip_space_and_comments();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) throw InvalidInput(std::string("pgm: ") + what + " too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw InvalidInput(std::string("pgm: expected ") + what);
    return static_cast<int>(value);
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_pgm(const Frame& frame) {
  validate(frame);
  std::string out = "P5\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
  out.append(frame.pixels.begin(), frame.pixels.end());
  return out;
}

Frame decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw InvalidInput("pgm: missing P5 magic");
  HeaderReader reader(bytes);
  reader.advance(2);
  Frame frame;
  frame.width = reader.next_int("width");
  frame.height = reader.next_int("height");
  if (reader.next_int("maxval") != 255) throw InvalidInput("pgm: only maxval 255 is supported");
  // Exactly one whitespace byte separates the header from the raster.
  if (reader.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[reader.pos()]))) {
    throw InvalidInput("pgm: malformed header");
  }
  reader.advance(1);
  const std::size_t expected = static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height);
  if (bytes.size() - reader.pos() < expected) throw InvalidInput("pgm: truncated raster");
  const auto* raster = reinterpret_cast<const std::uint8_t*>(bytes.data() + reader.pos());
  frame.pixels.assign(raster, raster + expected);
  validate(frame);
  return frame;
}

Frame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("pgm: cannot open " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_pgm(bytes);
}

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("pgm: cannot write " + path.string());
  const std::string bytes = encode_pgm(frame);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace wavewall::vision
