#include "pakelab/sim/trace.hpp"

#include <filesystem>
#include <fstream>

#include "pakelab/errors.hpp"

namespace pakelab::sim {

std::string Actor::label() const {
    switch (kind) {
        case ActorKind::client: return "client:" + std::to_string(index);
        case ActorKind::server: return "server";
        case ActorKind::adversary: return "adversary";
        case ActorKind::simulator: return "sim";
    }
    return "unknown";
}

Actor Actor::from_label(const std::string& label) {
    if (label == "server") return server();
    if (label == "adversary") return adversary();
    if (label == "sim") return simulator();
    if (label.starts_with("client:")) {
        try {
            return client(static_cast<uint32_t>(std::stoul(label.substr(7))));
        } catch (const std::exception&) {
            throw ParseError("bad actor label: " + label);
        }
    }
    throw ParseError("bad actor label: " + label);
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::run_meta: return "run-meta";
        case EventKind::session_start: return "session-start";
        case EventKind::msg_send: return "msg-send";
        case EventKind::msg_recv: return "msg-recv";
        case EventKind::client_accept: return "client-accept";
        case EventKind::client_reject: return "client-reject";
        case EventKind::server_accept: return "server-accept";
        case EventKind::server_reject: return "server-reject";
        case EventKind::forge: return "forge";
        case EventKind::trial: return "trial";
        case EventKind::lockout: return "lockout";
        case EventKind::retry: return "retry";
        case EventKind::session_drop: return "session-drop";
    }
    return "unknown";
}

EventKind event_kind_from_string(std::string_view name) {
    static const std::pair<std::string_view, EventKind> table[] = {
        {"run-meta", EventKind::run_meta},
        {"session-start", EventKind::session_start},
        {"msg-send", EventKind::msg_send},
        {"msg-recv", EventKind::msg_recv},
        {"client-accept", EventKind::client_accept},
        {"client-reject", EventKind::client_reject},
        {"server-accept", EventKind::server_accept},
        {"server-reject", EventKind::server_reject},
        {"forge", EventKind::forge},
        {"trial", EventKind::trial},
        {"lockout", EventKind::lockout},
        {"retry", EventKind::retry},
        {"session-drop", EventKind::session_drop},
    };
    for (const auto& [n, k] : table)
        if (n == name) return k;
    throw ParseError("unknown event kind: " + std::string(name));
}

nlohmann::json TraceEvent::to_json() const {
    nlohmann::json j;
    j["t"] = time;
    j["seq"] = seq;
    j["kind"] = std::string(to_string(kind));
    j["actor"] = actor.label();
    if (session != 0) j["session"] = session;
    if (!detail.empty()) j["detail"] = detail;
    if (!identity.empty()) j["identity"] = identity;
    if (!key_digest.empty()) j["key"] = key_digest;
    if (!guess.empty()) j["guess"] = guess;
    if (!mode.empty()) j["mode"] = mode;
    if (!meta.is_null()) j["meta"] = meta;
    return j;
}

TraceEvent TraceEvent::from_json(const nlohmann::json& j) {
    TraceEvent e;
    try {
        e.time = j.at("t").get<uint64_t>();
        e.seq = j.at("seq").get<uint64_t>();
        e.kind = event_kind_from_string(j.at("kind").get<std::string>());
        e.actor = Actor::from_label(j.at("actor").get<std::string>());
        e.session = j.value("session", uint64_t{0});
        e.detail = j.value("detail", std::string{});
        e.identity = j.value("identity", std::string{});
        e.key_digest = j.value("key", std::string{});
        e.guess = j.value("guess", std::string{});
        e.mode = j.value("mode", std::string{});
        if (j.contains("meta")) e.meta = j.at("meta");
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("bad trace event: ") + ex.what());
    }
    return e;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write file: " + tmp);
        out << contents;
        if (!out.good()) throw ConfigError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

Trace load_trace_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path);
    Trace trace;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ParseError(path + ":" + std::to_string(line_no) + ": invalid JSON");
        try {
            trace.push_back(TraceEvent::from_json(j));
        } catch (const ParseError& ex) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return trace;
}

void write_trace_jsonl(const Trace& trace, const std::string& path) {
    std::string out;
    for (const auto& event : trace) {
        out += event.to_json().dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace pakelab::sim
