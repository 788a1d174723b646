#include "minlift/errors.hpp"
#include "minlift/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace minlift {

namespace {

class Cursor {
 public:
  Cursor(const std::string& bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = static_cast<unsigned char>(bytes_[pos_]);
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) {
        throw FormatError(std::string("PGM: ") + what + " out of range", start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= bytes_.size()) {
        throw FormatError(std::string("PGM: truncated, expected ") + what, pos_);
      }
      throw FormatError(std::string("PGM: expected ") + what, start);
    }
    return value;
  }

  void single_whitespace() {
    if (pos_ >= bytes_.size() ||
        !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError("PGM: expected whitespace after maxval", pos_);
    }
    ++pos_;
  }

 private:
  const std::string& bytes_;
  std::size_t pos_;
};

}  // namespace

ImageGray parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' ||
      (bytes[1] != '2' && bytes[1] != '5')) {
    throw FormatError("PGM: bad magic number (expected P2 or P5)", 0);
  }
  const bool binary = bytes[1] == '5';
  Cursor cur(bytes, 2);
  const long width = cur.read_uint("width");
  const long height = cur.read_uint("height");
  const std::size_t maxval_pos = cur.pos();
  const long maxval = cur.read_uint("maxval");
  if (width < 1 || height < 1) {
    throw FormatError("PGM: empty image", maxval_pos);
  }
  if (maxval != 255) throw FormatError("PGM: maxval must be 255", maxval_pos);
  if (width != height) {
    throw FormatError("PGM: image must be square (got " + std::to_string(width) +
                          "x" + std::to_string(height) + ")",
                      maxval_pos);
  }
  cur.single_whitespace();

  const Index count = Index(width) * height;
  HVector px(count);
  if (binary) {
    const std::size_t start = cur.pos();
    if (bytes.size() - start < std::size_t(count)) {
      throw FormatError("PGM: truncated pixel data", bytes.size());
    }
    for (Index i = 0; i < count; ++i) {
      px[i] = static_cast<unsigned char>(bytes[start + i]) / 255.0;
    }
  } else {
    for (Index i = 0; i < count; ++i) {
      const std::size_t at = cur.pos();
      const long value = cur.read_uint("pixel value");
      if (value > 255) throw FormatError("PGM: pixel value exceeds maxval", at);
      px[i] = value / 255.0;
    }
  }
  return ImageGray(int(width), std::move(px));
}

ImageGray load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

std::string encode_pgm(const ImageGray& img) {
  require_finite(img.pixels, "encode_pgm");
  std::string out = "P5\n" + std::to_string(img.M) + " " +
                    std::to_string(img.M) + "\n255\n";
  out.reserve(out.size() + std::size_t(img.size()));
  for (Index i = 0; i < img.size(); ++i) {
    const double v = std::clamp(img.pixels[i], 0.0, 1.0);
    const double q = std::floor(v * 255.0 + 0.5);
    out.push_back(static_cast<char>(static_cast<unsigned char>(q)));
  }
  return out;
}

void save_pgm(const ImageGray& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::string bytes = encode_pgm(img);
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace minlift
