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

#include "teleop/live.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>

namespace teleop {

namespace {

using Clock = std::chrono::steady_clock;

std::pair<std::string, std::uint16_t> parse_address(const std::string& addr) {
  const std::size_t colon = addr.rfind(':');
  if (colon == std::string::npos) {
    throw ConnectFailed("address must be host:port, got '" + addr + "'");
  }
  std::string host = addr.substr(0, colon);
  if (host.empty()) {
    host = "0.0.0.0";
  }
  const int port = std::stoi(addr.substr(colon + 1));
  if (port < 0 || port > 0xFFFF) {
    throw ConnectFailed("port out of range in '" + addr + "'");
  }
  return {host, static_cast<std::uint16_t>(port)};
}

sockaddr_in make_sockaddr(const std::string& host, std::uint16_t port) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1) {
    throw ConnectFailed("cannot parse IPv4 address '" + host + "'");
  }
  return sa;
}

/// Thin RAII socket. Only what the two hosts need.
class TcpSocket {
 public:
  TcpSocket() = default;
  explicit TcpSocket(int fd) : fd_(fd) {}
  TcpSocket(TcpSocket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  TcpSocket& operator=(TcpSocket&& o) noexcept {
    close();
    fd_ = o.fd_;
    o.fd_ = -1;
    return *this;
  }
  TcpSocket(const TcpSocket&) = delete;
  TcpSocket& operator=(const TcpSocket&) = delete;
  ~TcpSocket() { close(); }

  void close() {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }

  void set_nonblocking() {
    const int flags = ::fcntl(fd_, F_GETFL, 0);
    ::fcntl(fd_, F_SETFL, flags | O_NONBLOCK);
  }

  void set_nodelay() {
    const int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }

  /// Blocking write of the whole buffer; false once the peer is gone.
  bool send_all(std::span<const std::uint8_t> data) {
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n =
          ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
      if (n > 0) {
        off += static_cast<std::size_t>(n);
        continue;
      }
      if (n < 0 && (errno == EINTR)) {
        continue;
      }
      if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
        // Socket buffer full; frames are tiny, so just yield and retry.
        std::this_thread::sleep_for(std::chrono::microseconds(100));
        continue;
      }
      return false;
    }
    return true;
  }

  /// Non-blocking read; -1 = nothing available, 0 = peer closed, else bytes.
  ssize_t recv_some(std::uint8_t* buf, std::size_t cap) {
    const ssize_t n = ::recv(fd_, buf, cap, 0);
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR)) {
      return -1;
    }
    return n;
  }

 private:
  int fd_ = -1;
};

TcpSocket connect_with_backoff(const std::string& address, int timeout_ms) {
  const auto [host, port] = parse_address(address);
  const sockaddr_in sa = make_sockaddr(host == "0.0.0.0" ? "127.0.0.1" : host, port);

  const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  int backoff_ms = 50;
  while (true) {
    TcpSocket sock(::socket(AF_INET, SOCK_STREAM, 0));
    if (!sock.valid()) {
      throw ConnectFailed("socket() failed");
    }
    if (::connect(sock.fd(), reinterpret_cast<const sockaddr*>(&sa), sizeof(sa)) == 0) {
      sock.set_nodelay();
      return sock;
    }
    if (Clock::now() + std::chrono::milliseconds(backoff_ms) >= deadline) {
      throw ConnectFailed("could not connect to " + address + " within " +
                          std::to_string(timeout_ms) + " ms");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
    backoff_ms = std::min(backoff_ms * 2, 800);
  }
}

TcpSocket listen_and_accept(const std::string& address, int timeout_ms,
                            const std::function<void(std::uint16_t)>& on_listening) {
  const auto [host, port] = parse_address(address);
  sockaddr_in sa = make_sockaddr(host, port);

  TcpSocket listener(::socket(AF_INET, SOCK_STREAM, 0));
  if (!listener.valid()) {
    throw ConnectFailed("socket() failed");
  }
  const int one = 1;
  ::setsockopt(listener.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listener.fd(), reinterpret_cast<const sockaddr*>(&sa), sizeof(sa)) != 0) {
    throw ConnectFailed("cannot bind " + address + ": " + std::strerror(errno));
  }
  if (::listen(listener.fd(), 1) != 0) {
    throw ConnectFailed("listen() failed");
  }
  if (on_listening) {
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listener.fd(), reinterpret_cast<sockaddr*>(&bound), &len);
    on_listening(ntohs(bound.sin_port));
  }

  listener.set_nonblocking();
  const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  while (Clock::now() < deadline) {
    const int fd = ::accept(listener.fd(), nullptr, nullptr);
    if (fd >= 0) {
      TcpSocket conn(fd);
      conn.set_nodelay();
      conn.set_nonblocking();
      return conn;
    }
    // Tight poll: the session clock starts at accept, and host 1 starts its
    // clock right after connect; a coarse poll here would skew the two.
    std::this_thread::sleep_for(std::chrono::microseconds(500));
  }
  throw ConnectFailed("no client connected to " + address + " within " +
                      std::to_string(timeout_ms) + " ms");
}

/// Mutex-guarded single-value mailbox; producers overwrite (newest wins),
/// the consumer takes ownership. Values are immutable once deposited.
template <typename T>
class LatestSlot {
 public:
  void put(const T& v) {
    std::lock_guard<std::mutex> lock(m_);
    v_ = v;
  }
  std::optional<T> take() {
    std::lock_guard<std::mutex> lock(m_);
    std::optional<T> out = std::move(v_);
    v_.reset();
    return out;
  }

 private:
  std::mutex m_;
  std::optional<T> v_;
};

std::uint64_t elapsed_us(Clock::time_point since) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - since)
          .count());
}

}  // namespace

LiveResult run_live_host1(const SensorLog& scenario, const LiveOptions& opts) {
  if (!scenario.semg.empty() && !opts.pipeline.model.has_value()) {
    throw ScenarioInvalid(
        "scenario contains sEMG records but no classifier model was given");
  }

  TcpSocket sock = connect_with_backoff(opts.address, opts.connect_timeout_ms);

  MasterHost master(opts.pipeline.master);
  if (opts.pipeline.model.has_value()) {
    master.load_model(*opts.pipeline.model);
  }

  LiveResult result;
  SimStats& stats = result.stats;
  std::mutex send_mutex;
  std::atomic<bool> send_failed{false};

  auto send_frame = [&](const WireMessage& m) {
    const std::vector<std::uint8_t> frame = frame_for_stream(encode_message(m));
    std::lock_guard<std::mutex> lock(send_mutex);
    if (!sock.send_all(frame)) {
      send_failed.store(true);
    }
  };

  send_frame(master.make_calibrate(0, opts.pipeline.initial_pose));

  IncrementSmoother ref_smoother(opts.pipeline.slave.smoother);
  RobotPose ref_pose = opts.pipeline.initial_pose;
  std::optional<Vec3> wrist0;
  std::optional<Quaternion> orient0;
  std::mutex stats_mutex;

  const auto start = Clock::now();

  std::thread imu_thread([&] {
    for (const ImuSample& sample : scenario.imu) {
      std::this_thread::sleep_until(start + std::chrono::microseconds(sample.t_us));
      if (send_failed.load()) {
        break;
      }
      const std::optional<WireMessage> m = master.imu_step(sample);
      if (!master.last_wrist().has_value()) {
        continue;
      }
      if (!wrist0.has_value()) {
        wrist0 = *master.last_wrist();
        orient0 = *master.last_orientation();
        result.human.samples.push_back(TrajectorySample{
            sample.t_us, opts.pipeline.initial_pose.p, opts.pipeline.initial_pose.q});
        result.human_filtered.samples.push_back(TrajectorySample{
            sample.t_us, opts.pipeline.initial_pose.p, opts.pipeline.initial_pose.q});
        continue;
      }
      if (!m.has_value()) {
        continue;
      }
      const Vec3 p_cal =
          opts.pipeline.initial_pose.p + (*master.last_wrist() - *wrist0);
      const Quaternion q_rel =
          quat_mul(*master.last_orientation(), quat_inverse(*orient0));
      result.human.samples.push_back(TrajectorySample{
          sample.t_us, p_cal, quat_mul(q_rel, opts.pipeline.initial_pose.q)});

      const Vec3 dp{m->pose[0], m->pose[1], m->pose[2]};
      const Quaternion dq =
          renormalized(m->pose[3], m->pose[4], m->pose[5], m->pose[6]);
      ref_smoother.push(dp, dq);
      ref_pose = apply_pose_update(ref_pose, ref_smoother.smoothed_position(),
                                   ref_smoother.smoothed_rotation());
      result.human_filtered.samples.push_back(
          TrajectorySample{sample.t_us, ref_pose.p, ref_pose.q});

      send_frame(*m);
      std::lock_guard<std::mutex> lock(stats_mutex);
      ++stats.sent_pose;
    }
  });

  std::thread semg_thread([&] {
    for (const SemgFrame& frame : scenario.semg) {
      std::this_thread::sleep_until(start + std::chrono::microseconds(frame.t_us));
      if (send_failed.load()) {
        break;
      }
      const std::optional<WireMessage> m = master.semg_step(frame);
      if (m.has_value()) {
        send_frame(*m);
        std::lock_guard<std::mutex> lock(stats_mutex);
        ++stats.sent_grip;
      }
    }
  });

  imu_thread.join();
  semg_thread.join();

  stats.imu_faults = master.imu_faults();
  result.peer_disconnected = send_failed.load();
  if (result.peer_disconnected) {
    throw PeerDisconnected("host 2 went away before the scenario finished");
  }
  return result;
}

LiveResult run_live_host2(const LiveOptions& opts) {
  TcpSocket sock =
      listen_and_accept(opts.address, opts.accept_timeout_ms, opts.on_listening);

  LiveResult result;
  SimStats& stats = result.stats;

  SlaveController slave(opts.pipeline.slave);
  LatestSlot<PoseIncrement> increment_slot;
  LatestSlot<GripCommand> grip_slot;
  LatestSlot<RobotPose> calibrate_slot;

  std::atomic<bool> disconnected{false};
  std::atomic<bool> stop{false};
  std::atomic<std::uint64_t> received_pose{0};
  std::atomic<std::uint64_t> received_grip{0};
  std::atomic<std::uint64_t> decode_errors{0};

  const auto start = Clock::now();

  // 250 Hz data-checking thread: drain whatever the socket has, never block.
  std::thread receive_thread([&] {
    FrameSplitter splitter;
    std::uint8_t buf[4096];
    std::uint64_t tick = 0;
    while (!stop.load()) {
      ++tick;
      std::this_thread::sleep_until(
          start + std::chrono::microseconds(tick * opts.pipeline.rates.receive_period_us));
      while (true) {
        const ssize_t n = sock.recv_some(buf, sizeof(buf));
        if (n < 0) {
          break;  // nothing queued
        }
        if (n == 0) {
          disconnected.store(true);
          return;
        }
        splitter.feed(std::span<const std::uint8_t>(buf, static_cast<std::size_t>(n)));
      }
      std::vector<std::vector<std::uint8_t>> frames;
      while (auto frame = splitter.next_frame()) {
        frames.push_back(std::move(*frame));
      }
      if (frames.empty()) {
        continue;
      }
      const std::uint64_t now = elapsed_us(start);
      const ReceiveBatch batch = ingest_frames(frames, now);
      received_pose.fetch_add(batch.pose_count);
      received_grip.fetch_add(batch.grip_count);
      decode_errors.fetch_add(batch.decode_errors);
      if (batch.calibrate_pose.has_value()) {
        calibrate_slot.put(*batch.calibrate_pose);
      }
      if (batch.increment.has_value()) {
        increment_slot.put(*batch.increment);
      }
      if (batch.grip.has_value()) {
        grip_slot.put(*batch.grip);
      }
    }
  });

  // 1000 Hz control thread.
  int last_grip = 0;
  std::optional<std::uint64_t> disconnect_seen_us;
  const std::uint64_t duration_us =
      static_cast<std::uint64_t>(opts.duration_s * 1e6);
  const std::uint64_t grace_us = opts.pipeline.slave.staleness_us + 100000;

  std::uint64_t tick = 0;
  while (true) {
    ++tick;
    std::this_thread::sleep_until(
        start + std::chrono::microseconds(tick * opts.pipeline.rates.control_period_us));
    const std::uint64_t now = elapsed_us(start);
    if (now >= duration_us) {
      break;
    }
    if (disconnected.load()) {
      if (!disconnect_seen_us.has_value()) {
        disconnect_seen_us = now;
      } else if (now - *disconnect_seen_us > grace_us) {
        break;  // held the pose through one staleness window; done
      }
    }

    if (const auto cal = calibrate_slot.take()) {
      slave.calibrate(*cal, now);
    }
    if (!slave.calibrated()) {
      continue;
    }
    if (const auto inc = increment_slot.take()) {
      slave.offer_increment(*inc, now);
    }
    if (const auto grip = grip_slot.take()) {
      slave.offer_grip(*grip, now);
    }

    const ControlOutput out = slave.step(now);
    ++stats.control_cycles;
    // Late wakeups can alias onto the same microsecond; keep the recorded
    // trajectory strictly increasing.
    std::uint64_t record_t = now;
    if (!result.commanded.samples.empty() &&
        record_t <= result.commanded.samples.back().t_us) {
      record_t = result.commanded.samples.back().t_us + 1;
    }
    result.commanded.samples.push_back(
        TrajectorySample{record_t, out.pose.p, out.pose.q});
    if (out.grip_state != last_grip) {
      last_grip = out.grip_state;
      ++stats.grip_transitions;
      result.grip_transitions.push_back(GripCommand{now, out.grip_state});
    }
  }

  stop.store(true);
  receive_thread.join();

  stats.received_pose = received_pose.load();
  stats.received_grip = received_grip.load();
  stats.decode_errors = decode_errors.load();
  stats.integrations = slave.integrations();
  stats.stale_cycles = slave.stale_cycles();
  stats.max_staleness_us = slave.max_staleness_us();
  stats.increment_clamps = slave.increment_clamps();
  result.peer_disconnected = disconnected.load();
  return result;
}

}  // namespace teleop
