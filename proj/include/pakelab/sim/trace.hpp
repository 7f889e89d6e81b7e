#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "pakelab/bytes.hpp"

namespace pakelab::sim {

enum class ActorKind : uint8_t { client, server, adversary, simulator };

struct Actor {
    ActorKind kind = ActorKind::simulator;
    uint32_t index = 0;  // client index; meaningless for the other kinds

    static Actor client(uint32_t i) { return {ActorKind::client, i}; }
    static Actor server() { return {ActorKind::server, 0}; }
    static Actor adversary() { return {ActorKind::adversary, 0}; }
    static Actor simulator() { return {ActorKind::simulator, 0}; }

    std::string label() const;
    static Actor from_label(const std::string& label);
    bool operator==(const Actor&) const = default;
};

enum class EventKind : uint8_t {
    run_meta,
    session_start,
    msg_send,
    msg_recv,
    client_accept,
    client_reject,
    server_accept,
    server_reject,
    forge,
    trial,
    lockout,
    retry,
    session_drop,
};

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);

/// One timestamped record. Which payload fields are meaningful depends on
/// the kind; unused fields stay empty and are omitted from the JSON form.
/// Events are totally ordered by (time, seq).
struct TraceEvent {
    uint64_t time = 0;
    uint64_t seq = 0;
    EventKind kind = EventKind::run_meta;
    Actor actor;
    uint64_t session = 0;     // 0 = not session-scoped
    std::string detail;       // message kind, reject reason, trial result, route
    std::string identity;     // account under authentication / trial target
    std::string key_digest;   // accept events
    std::string guess;        // trial events
    std::string mode;         // trial events: "reverse" | "standard"
    nlohmann::json meta;      // run_meta only

    nlohmann::json to_json() const;
    static TraceEvent from_json(const nlohmann::json& j);
};

using Trace = std::vector<TraceEvent>;

class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void on_event(const TraceEvent& event) = 0;
};

class VectorTrace final : public TraceSink {
public:
    void on_event(const TraceEvent& event) override { events.push_back(event); }
    Trace events;
};

/// One event per line. Throws ParseError naming the offending line.
Trace load_trace_jsonl(const std::string& path);
/// Write-then-rename; reruns with identical traces produce identical bytes.
void write_trace_jsonl(const Trace& trace, const std::string& path);

/// Atomic text-file write used for every artifact the tools produce.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace pakelab::sim
