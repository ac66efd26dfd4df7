#include "ergohrc/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>

#include "ergohrc/errors.hpp"

namespace ergohrc {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

std::optional<unsigned long long> parse_unsigned(std::string_view s) {
    if (!all_digits(s)) return std::nullopt;
    unsigned long long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

DecodeResult decode_datagram(std::string_view payload, double timestamp) {
    DecodeResult result;
    if (payload.empty() || payload.back() != '\n') return result;
    payload.remove_suffix(1);

    const auto space = payload.find(' ');
    if (space == std::string_view::npos) return result;
    const auto frame = parse_unsigned(payload.substr(0, space));
    const auto id = parse_unsigned(payload.substr(space + 1));
    if (!frame || !id) return result;

    if (*id < static_cast<unsigned>(kMinGestureId) ||
        *id > static_cast<unsigned>(kMaxGestureId)) {
        result.status = DecodeStatus::OutOfRange;
        return result;
    }
    result.status = DecodeStatus::Ok;
    result.event.frame_index = static_cast<std::size_t>(*frame);
    result.event.gesture = gesture_from_id(static_cast<int>(*id));
    result.event.timestamp = timestamp;
    return result;
}

std::optional<GestureFrameEvent> GestureStreamReceiver::receive(
    std::string_view payload, double timestamp) {
    const auto decoded = decode_datagram(payload, timestamp);
    switch (decoded.status) {
        case DecodeStatus::Malformed:
            ++counters_.malformed;
            return std::nullopt;
        case DecodeStatus::OutOfRange:
            ++counters_.out_of_range;
            return std::nullopt;
        case DecodeStatus::Ok:
            break;
    }
    if (last_frame_ && decoded.event.frame_index <= *last_frame_) {
        ++counters_.out_of_order;
        return std::nullopt;
    }
    last_frame_ = decoded.event.frame_index;
    ++counters_.accepted;
    return decoded.event;
}

UdpGestureListener::UdpGestureListener(const std::string& bind_address,
                                       std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) throw ValidationError("cannot create UDP socket");

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, bind_address.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw ValidationError("bad bind address '" + bind_address + "'");
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd_);
        throw ValidationError("cannot bind UDP socket to " + bind_address + ":" +
                              std::to_string(port));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len) != 0) {
        ::close(fd_);
        throw ValidationError("cannot read bound UDP port");
    }
    port_ = ntohs(bound.sin_port);
    start_seconds_ = now_seconds();
}

UdpGestureListener::~UdpGestureListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::optional<GestureFrameEvent> UdpGestureListener::poll_event(int timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, timeout_ms);
    if (ready <= 0) return std::nullopt;

    char buffer[512];
    const ssize_t got = ::recvfrom(fd_, buffer, sizeof(buffer), 0, nullptr, nullptr);
    if (got < 0) return std::nullopt;
    return receiver_.receive(std::string_view(buffer, static_cast<std::size_t>(got)),
                             now_seconds() - start_seconds_);
}

void send_datagram(const std::string& address, std::uint16_t port,
                   std::string_view payload) {
    const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd < 0) throw ValidationError("cannot create UDP socket");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, address.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw ValidationError("bad address '" + address + "'");
    }
    const ssize_t sent =
        ::sendto(fd, payload.data(), payload.size(), 0,
                 reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
    ::close(fd);
    if (sent != static_cast<ssize_t>(payload.size()))
        throw ValidationError("UDP send failed");
}

LatencyReport measure_pipeline_latency(const std::vector<std::string>& payloads,
                                       std::size_t run_length) {
    if (payloads.empty()) throw ValidationError("no payloads to measure");
    using clock = std::chrono::steady_clock;

    LatencyReport report;
    report.durations_ms.reserve(payloads.size());
    GestureStreamReceiver receiver;
    GestureDebouncer filter(run_length);

    for (const auto& payload : payloads) {
        const auto t0 = clock::now();
        if (const auto event = receiver.receive(payload))
            if (filter.feed(*event)) ++report.commands_emitted;
        const auto t1 = clock::now();
        report.durations_ms.push_back(
            std::chrono::duration<double, std::milli>(t1 - t0).count());
    }

    auto sorted = report.durations_ms;
    std::sort(sorted.begin(), sorted.end());
    report.max_ms = sorted.back();
    const std::size_t rank = static_cast<std::size_t>(
        std::ceil(0.99 * static_cast<double>(sorted.size())));
    report.p99_ms = sorted[rank == 0 ? 0 : rank - 1];
    return report;
}

}  // namespace ergohrc
