#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergohrc/workflow.hpp"

namespace ergohrc {

// Payload grammar: "<frame_index> <gesture_id>\n", both ASCII decimal.
enum class DecodeStatus { Ok, Malformed, OutOfRange };

struct DecodeResult {
    DecodeStatus status = DecodeStatus::Malformed;
    GestureFrameEvent event;  // valid only when status == Ok
};

// Never throws: a bad datagram is a rejection, not an error.
DecodeResult decode_datagram(std::string_view payload, double timestamp = 0.0);

struct TransportCounters {
    std::size_t accepted = 0;
    std::size_t malformed = 0;
    std::size_t out_of_range = 0;
    std::size_t out_of_order = 0;
};

// Decodes datagrams and enforces strictly increasing frame indices; UDP
// gives no ordering guarantee, but the debounce stage needs ordered frames.
class GestureStreamReceiver {
  public:
    std::optional<GestureFrameEvent> receive(std::string_view payload,
                                             double timestamp = 0.0);
    const TransportCounters& counters() const { return counters_; }

  private:
    TransportCounters counters_;
    std::optional<std::size_t> last_frame_;
};

// Blocking UDP listener over a GestureStreamReceiver. Pass port 0 to bind an
// ephemeral port and read it back via port().
class UdpGestureListener {
  public:
    UdpGestureListener(const std::string& bind_address, std::uint16_t port);
    ~UdpGestureListener();
    UdpGestureListener(const UdpGestureListener&) = delete;
    UdpGestureListener& operator=(const UdpGestureListener&) = delete;

    std::uint16_t port() const { return port_; }
    // Waits up to timeout_ms for one datagram. nullopt on timeout or when the
    // datagram was rejected (check counters()).
    std::optional<GestureFrameEvent> poll_event(int timeout_ms);
    const TransportCounters& counters() const { return receiver_.counters(); }

  private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
    GestureStreamReceiver receiver_;
    double start_seconds_ = 0.0;
};

void send_datagram(const std::string& address, std::uint16_t port,
                   std::string_view payload);

struct LatencyReport {
    std::vector<double> durations_ms;  // one entry per datagram
    double max_ms = 0.0;
    double p99_ms = 0.0;  // nearest-rank percentile
    std::size_t commands_emitted = 0;
};

// Runs decode + ordering + debounce over an in-memory payload stream and
// times each step with the wall clock.
LatencyReport measure_pipeline_latency(const std::vector<std::string>& payloads,
                                       std::size_t run_length = kDebounceRunLength);

}  // namespace ergohrc
