// Copyright 2026 The ArmTeleop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "teleop/wire.hpp"

#include <cstring>

namespace teleop {

namespace {

constexpr std::size_t kHeaderSize = 11;  // magic + version + kind + t_us
constexpr std::size_t kCrcSize = 4;

std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int bit = 0; bit < 8; ++bit) {
      c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
    }
    table[i] = c;
  }
  return table;
}

void put_u16_be(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  }
}

void put_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  }
}

void put_f64_le(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64_le(out, bits);
}

std::uint32_t get_u32_le(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | p[i];
  }
  return v;
}

std::uint64_t get_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | p[i];
  }
  return v;
}

double get_f64_le(const std::uint8_t* p) {
  const std::uint64_t bits = get_u64_le(p);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::size_t payload_size(MsgKind kind) {
  switch (kind) {
    case MsgKind::pose_increment:
    case MsgKind::calibrate:
      return 7 * 8;
    case MsgKind::grip:
      return 1;
  }
  return 0;
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  static const std::array<std::uint32_t, 256> table = make_crc_table();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t byte : data) {
    crc = table[(crc ^ byte) & 0xFFu] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

WireMessage make_message(MsgKind kind, std::uint64_t t_us,
                         std::span<const double> payload) {
  WireMessage m;
  m.kind = kind;
  m.t_us = t_us;
  switch (kind) {
    case MsgKind::pose_increment:
    case MsgKind::calibrate:
      if (payload.size() != 7) {
        throw PayloadArityMismatch("pose payload needs 7 doubles, got " +
                                   std::to_string(payload.size()));
      }
      for (std::size_t i = 0; i < 7; ++i) {
        m.pose[i] = payload[i];
      }
      break;
    case MsgKind::grip:
      if (payload.size() != 1) {
        throw PayloadArityMismatch("grip payload needs 1 value, got " +
                                   std::to_string(payload.size()));
      }
      m.grip_state = payload[0] != 0.0 ? 1 : 0;
      break;
    default:
      throw PayloadArityMismatch("unknown message kind");
  }
  return m;
}

WireMessage make_grip_message(std::uint64_t t_us, std::uint8_t state) {
  WireMessage m;
  m.kind = MsgKind::grip;
  m.t_us = t_us;
  m.grip_state = state != 0 ? 1 : 0;
  return m;
}

std::size_t frame_size(MsgKind kind) {
  return kHeaderSize + payload_size(kind) + kCrcSize;
}

std::vector<std::uint8_t> encode_message(const WireMessage& m) {
  const std::uint8_t kind = static_cast<std::uint8_t>(m.kind);
  if (kind < 1 || kind > 3) {
    throw PayloadArityMismatch("cannot encode unknown message kind");
  }

  std::vector<std::uint8_t> out;
  out.reserve(frame_size(m.kind));
  out.push_back(kWireMagic);
  out.push_back(kWireVersion);
  out.push_back(kind);
  put_u64_le(out, m.t_us);
  if (m.kind == MsgKind::grip) {
    out.push_back(m.grip_state);
  } else {
    for (double v : m.pose) {
      put_f64_le(out, v);
    }
  }
  put_u32_le(out, crc32(out));
  return out;
}

const char* decode_error_name(DecodeError e) {
  switch (e) {
    case DecodeError::none:
      return "none";
    case DecodeError::bad_magic:
      return "bad_magic";
    case DecodeError::bad_crc:
      return "bad_crc";
    case DecodeError::unknown_kind:
      return "unknown_kind";
    case DecodeError::truncated:
      return "truncated";
  }
  return "unknown";
}

DecodeResult decode_message(std::span<const std::uint8_t> frame) {
  DecodeResult r;
  if (frame.empty()) {
    r.error = DecodeError::truncated;
    return r;
  }
  // Magic and version identify the protocol; checked before anything else.
  if (frame[0] != kWireMagic) {
    r.error = DecodeError::bad_magic;
    return r;
  }
  if (frame.size() < kHeaderSize + kCrcSize) {
    r.error = DecodeError::truncated;
    return r;
  }
  // CRC covers every byte before it, so any single corrupted byte in the
  // body surfaces here rather than as a misparsed field.
  const std::uint32_t stored = get_u32_le(frame.data() + frame.size() - kCrcSize);
  const std::uint32_t actual =
      crc32(frame.subspan(0, frame.size() - kCrcSize));
  if (stored != actual) {
    r.error = DecodeError::bad_crc;
    return r;
  }
  if (frame[1] != kWireVersion) {
    r.error = DecodeError::bad_magic;
    return r;
  }
  const std::uint8_t kind_byte = frame[2];
  if (kind_byte < 1 || kind_byte > 3) {
    r.error = DecodeError::unknown_kind;
    return r;
  }
  const MsgKind kind = static_cast<MsgKind>(kind_byte);
  if (frame.size() != frame_size(kind)) {
    r.error = DecodeError::truncated;
    return r;
  }

  WireMessage m;
  m.kind = kind;
  m.t_us = get_u64_le(frame.data() + 3);
  if (kind == MsgKind::grip) {
    m.grip_state = frame[kHeaderSize];
  } else {
    for (std::size_t i = 0; i < 7; ++i) {
      m.pose[i] = get_f64_le(frame.data() + kHeaderSize + 8 * i);
    }
  }
  r.message = m;
  return r;
}

std::vector<std::uint8_t> frame_for_stream(std::span<const std::uint8_t> frame) {
  if (frame.size() > 0xFFFF) {
    throw Error("frame too large for 16-bit length prefix");
  }
  std::vector<std::uint8_t> out;
  out.reserve(frame.size() + 2);
  put_u16_be(out, static_cast<std::uint16_t>(frame.size()));
  out.insert(out.end(), frame.begin(), frame.end());
  return out;
}

void FrameSplitter::feed(std::span<const std::uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<std::vector<std::uint8_t>> FrameSplitter::next_frame() {
  if (buffer_.size() < 2) {
    return std::nullopt;
  }
  const std::size_t len = (static_cast<std::size_t>(buffer_[0]) << 8) | buffer_[1];
  if (buffer_.size() < 2 + len) {
    return std::nullopt;
  }
  std::vector<std::uint8_t> frame(buffer_.begin() + 2, buffer_.begin() + 2 + len);
  buffer_.erase(buffer_.begin(), buffer_.begin() + 2 + len);
  return frame;
}

}  // namespace teleop
