// Copyright 2026 The Surprisal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "surprisal/npy.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>

#include "surprisal/error.h"

namespace surprisal {
namespace {

static_assert(std::endian::native == std::endian::little,
              "npy payloads are read in place; big-endian hosts need byte swapping");

constexpr std::string_view kMagic = "\x93NUMPY";
constexpr std::size_t kPreambleSize = 10;  // magic + version + u16 header length

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

struct Header {
  std::string descr;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
  std::size_t payload_offset = 0;
};

std::size_t skip_space(std::string_view s, std::size_t pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  return pos;
}

// Position just past "'key':" in the header dict.
std::size_t find_key(std::string_view dict, std::string_view key) {
  for (char quote : {'\'', '"'}) {
    std::string needle;
    needle += quote;
    needle += key;
    needle += quote;
    const std::size_t at = dict.find(needle);
    if (at == std::string_view::npos) continue;
    std::size_t pos = skip_space(dict, at + needle.size());
    if (pos >= dict.size() || dict[pos] != ':') break;
    return skip_space(dict, pos + 1);
  }
  fail(ErrorCode::kMalformedHeader, "npy header lacks key '" + std::string(key) + "'");
}

Header parse_header(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    fail(ErrorCode::kBadMagic, "not an npy file (bad magic)");
  }
  if (bytes.size() < kPreambleSize) {
    fail(ErrorCode::kMalformedHeader, "npy preamble is truncated");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  const auto minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1) {
    fail(ErrorCode::kMalformedHeader, "unsupported npy version " + std::to_string(major) +
                                          "." + std::to_string(minor));
  }
  const std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                                 (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
  if (bytes.size() < kPreambleSize + header_len) {
    fail(ErrorCode::kMalformedHeader, "npy header is truncated");
  }
  const std::string_view dict = bytes.substr(kPreambleSize, header_len);
  if (dict.find('{') == std::string_view::npos || dict.find('}') == std::string_view::npos) {
    fail(ErrorCode::kMalformedHeader, "npy header is not a dict literal");
  }

  Header h;
  h.payload_offset = kPreambleSize + header_len;

  std::size_t pos = find_key(dict, "descr");
  if (pos >= dict.size() || (dict[pos] != '\'' && dict[pos] != '"')) {
    fail(ErrorCode::kMalformedHeader, "npy descr is not a string");
  }
  const char quote = dict[pos];
  const std::size_t end = dict.find(quote, pos + 1);
  if (end == std::string_view::npos) fail(ErrorCode::kMalformedHeader, "unterminated descr");
  h.descr = std::string(dict.substr(pos + 1, end - pos - 1));

  pos = find_key(dict, "fortran_order");
  if (dict.substr(pos, 4) == "True") {
    h.fortran_order = true;
  } else if (dict.substr(pos, 5) == "False") {
    h.fortran_order = false;
  } else {
    fail(ErrorCode::kMalformedHeader, "npy fortran_order is not a bool");
  }

  pos = find_key(dict, "shape");
  if (pos >= dict.size() || dict[pos] != '(') {
    fail(ErrorCode::kMalformedHeader, "npy shape is not a tuple");
  }
  const std::size_t close = dict.find(')', pos);
  if (close == std::string_view::npos) fail(ErrorCode::kMalformedHeader, "unterminated shape");
  std::string_view tuple = dict.substr(pos + 1, close - pos - 1);
  while (!tuple.empty()) {
    std::size_t i = skip_space(tuple, 0);
    if (i == tuple.size()) break;
    std::size_t value = 0;
    std::size_t digits = 0;
    while (i < tuple.size() && tuple[i] >= '0' && tuple[i] <= '9') {
      value = value * 10 + static_cast<std::size_t>(tuple[i] - '0');
      ++i;
      ++digits;
    }
    i = skip_space(tuple, i);
    if (digits == 0 || (i < tuple.size() && tuple[i] != ',')) {
      fail(ErrorCode::kMalformedHeader, "npy shape has a non-integer entry");
    }
    h.shape.push_back(value);
    tuple = i < tuple.size() ? tuple.substr(i + 1) : std::string_view{};
  }
  return h;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIo, "error reading '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) fail(ErrorCode::kIo, "error writing '" + path.string() + "'");
}

std::string make_header(std::string_view descr, const std::string& shape) {
  std::string dict = "{'descr': '" + std::string(descr) +
                     "', 'fortran_order': False, 'shape': " + shape + ", }";
  // Pad with spaces so the payload starts on a 64-byte boundary; the header
  // ends with a newline.
  const std::size_t unpadded = kPreambleSize + dict.size() + 1;
  dict.append((64 - unpadded % 64) % 64, ' ');
  dict += '\n';

  std::string out(kMagic);
  out += static_cast<char>(1);
  out += static_cast<char>(0);
  out += static_cast<char>(dict.size() & 0xff);
  out += static_cast<char>((dict.size() >> 8) & 0xff);
  out += dict;
  return out;
}

template <typename T>
T load(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

void check_payload(std::string_view bytes, const Header& h, std::size_t count,
                   std::size_t item_size) {
  if (bytes.size() - h.payload_offset < count * item_size) {
    fail(ErrorCode::kTruncatedPayload,
         "npy payload holds " + std::to_string(bytes.size() - h.payload_offset) +
             " bytes, expected " + std::to_string(count * item_size));
  }
}

}  // namespace

Matrix parse_array(std::string_view bytes) {
  const Header h = parse_header(bytes);
  std::size_t item_size = 0;
  if (h.descr == "<f8") {
    item_size = 8;
  } else if (h.descr == "<f4") {
    item_size = 4;
  } else {
    fail(ErrorCode::kUnsupportedDtype,
         "unsupported dtype '" + h.descr + "' (expected <f4 or <f8)");
  }
  if (h.fortran_order) fail(ErrorCode::kFortranOrder, "fortran_order arrays are not supported");
  if (h.shape.size() != 2) {
    fail(ErrorCode::kBadShape,
         "expected a 2-D array, got " + std::to_string(h.shape.size()) + " dimensions");
  }
  const std::size_t rows = h.shape[0];
  const std::size_t cols = h.shape[1];
  check_payload(bytes, h, rows * cols, item_size);

  std::vector<double> data(rows * cols);
  const char* p = bytes.data() + h.payload_offset;
  if (item_size == 8) {
    std::memcpy(data.data(), p, data.size() * sizeof(double));
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = load<float>(p + 4 * i);
  }
  return Matrix(rows, cols, std::move(data));
}

Matrix read_array_file(const std::filesystem::path& path) {
  try {
    return parse_array(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string serialize_array(const Matrix& matrix) {
  for (double v : matrix.data()) {
    if (!std::isfinite(v)) fail(ErrorCode::kNonFinite, "refusing to write non-finite value");
  }
  std::string out = make_header(
      "<f8", "(" + std::to_string(matrix.rows()) + ", " + std::to_string(matrix.cols()) + ")");
  const auto data = matrix.data();
  out.append(reinterpret_cast<const char*>(data.data()), data.size() * sizeof(double));
  return out;
}

void write_array_file(const std::filesystem::path& path, const Matrix& matrix) {
  write_file(path, serialize_array(matrix));
}

std::vector<std::int64_t> parse_label_array(std::string_view bytes) {
  const Header h = parse_header(bytes);
  if (h.fortran_order && h.shape.size() > 1 && h.shape[1] != 1) {
    fail(ErrorCode::kFortranOrder, "fortran_order label arrays are not supported");
  }
  if (h.shape.empty() || h.shape.size() > 2 || (h.shape.size() == 2 && h.shape[1] != 1)) {
    fail(ErrorCode::kBadShape, "label arrays must have shape (n,) or (n, 1)");
  }
  const std::size_t n = h.shape[0];

  const std::string& d = h.descr;
  const bool little_or_none = d.size() == 3 && (d[0] == '<' || d[0] == '|');
  if (!little_or_none) fail(ErrorCode::kUnsupportedDtype, "unsupported label dtype '" + d + "'");
  const char kind = d[1];
  const int width = d[2] - '0';

  std::vector<std::int64_t> out(n);
  const char* p = bytes.data() + h.payload_offset;
  auto decode = [&](auto tag) {
    using T = decltype(tag);
    check_payload(bytes, h, n, sizeof(T));
    for (std::size_t i = 0; i < n; ++i) {
      const T v = load<T>(p + sizeof(T) * i);
      if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v) || std::trunc(v) != v) {
          fail(ErrorCode::kUnsupportedDtype, "label " + std::to_string(i) + " is not integral");
        }
      }
      out[i] = static_cast<std::int64_t>(v);
    }
  };
  if (kind == 'i' && width == 1) decode(std::int8_t{});
  else if (kind == 'i' && width == 2) decode(std::int16_t{});
  else if (kind == 'i' && width == 4) decode(std::int32_t{});
  else if (kind == 'i' && width == 8) decode(std::int64_t{});
  else if (kind == 'u' && width == 1) decode(std::uint8_t{});
  else if (kind == 'u' && width == 2) decode(std::uint16_t{});
  else if (kind == 'u' && width == 4) decode(std::uint32_t{});
  else if (kind == 'f' && width == 4) decode(float{});
  else if (kind == 'f' && width == 8) decode(double{});
  else fail(ErrorCode::kUnsupportedDtype, "unsupported label dtype '" + d + "'");
  return out;
}

std::vector<std::int64_t> read_label_array_file(const std::filesystem::path& path) {
  try {
    return parse_label_array(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_label_array_file(const std::filesystem::path& path,
                            const std::vector<std::int64_t>& labels) {
  std::string out = make_header("<i8", "(" + std::to_string(labels.size()) + ", 1)");
  out.append(reinterpret_cast<const char*>(labels.data()), labels.size() * sizeof(std::int64_t));
  write_file(path, out);
}

}  // namespace surprisal
