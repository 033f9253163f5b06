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

#ifndef ARMTELEOP_WIRE_HPP_
#define ARMTELEOP_WIRE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teleop/errors.hpp"

namespace teleop {

// Frame layout (all multi-byte integers and doubles little-endian):
//
//   offset  size  field
//   0       1     magic 0xA7
//   1       1     version (1)
//   2       1     kind (1 = pose increment, 2 = grip, 3 = calibrate)
//   3       8     t_us, unsigned
//   11      n     payload:
//                   pose increment: 7 doubles (dp_x, dp_y, dp_z, q_eta, q_x, q_y, q_z)
//                   grip:           1 byte state (0 open, 1 close)
//                   calibrate:      7 doubles (initial p, then q_eta, q_x, q_y, q_z)
//   11+n    4     CRC-32 (IEEE reflected) of all preceding bytes
//
// Stream transports additionally prefix each frame with a 2-byte big-endian
// length (see frame_for_stream / FrameSplitter).

inline constexpr std::uint8_t kWireMagic = 0xA7;
inline constexpr std::uint8_t kWireVersion = 1;

enum class MsgKind : std::uint8_t {
  pose_increment = 1,
  grip = 2,
  calibrate = 3,
};

struct WireMessage {
  MsgKind kind = MsgKind::pose_increment;
  std::uint64_t t_us = 0;
  std::array<double, 7> pose{};  // pose_increment / calibrate payload
  std::uint8_t grip_state = 0;   // grip payload

  bool operator==(const WireMessage&) const = default;
};

/// CRC-32, polynomial 0xEDB88320 (reflected), init and final xor 0xFFFFFFFF.
std::uint32_t crc32(std::span<const std::uint8_t> data);

/// Builds a message from a raw numeric payload; throws PayloadArityMismatch
/// when the arity does not match the kind (7 doubles for pose kinds).
WireMessage make_message(MsgKind kind, std::uint64_t t_us,
                         std::span<const double> payload);
WireMessage make_grip_message(std::uint64_t t_us, std::uint8_t state);

std::vector<std::uint8_t> encode_message(const WireMessage& m);

enum class DecodeError {
  none,
  bad_magic,
  bad_crc,
  unknown_kind,
  truncated,
};

const char* decode_error_name(DecodeError e);

struct DecodeResult {
  std::optional<WireMessage> message;
  DecodeError error = DecodeError::none;

  bool ok() const { return message.has_value(); }
};

/// Parses one complete frame. Never throws: transport corruption is an
/// expected condition and is reported through DecodeResult.
DecodeResult decode_message(std::span<const std::uint8_t> frame);

/// Expected frame size for a kind, including header and CRC.
std::size_t frame_size(MsgKind kind);

/// Frame with the 2-byte big-endian length prefix used on stream transports.
std::vector<std::uint8_t> frame_for_stream(std::span<const std::uint8_t> frame);

/// Reassembles length-prefixed frames from an arbitrary chunking of the
/// stream (partial reads are the norm with non-blocking sockets).
class FrameSplitter {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  std::optional<std::vector<std::uint8_t>> next_frame();

  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::vector<std::uint8_t> buffer_;
};

}  // namespace teleop

#endif  // ARMTELEOP_WIRE_HPP_
