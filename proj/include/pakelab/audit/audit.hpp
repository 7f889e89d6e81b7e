#pragma once

#include "pakelab/sim/scenario.hpp"
#include "pakelab/sim/trace.hpp"

namespace pakelab::audit {

/// A client that completed key verification without a matching server run:
/// either no server acceptance exists in the session at all, or one exists
/// with a different key digest.
struct Violation {
    uint64_t session = 0;
    std::string client;  // actor label
    std::string key_digest;
    enum class Kind : uint8_t { no_server_run, key_mismatch } kind = Kind::no_server_run;

    std::string_view kind_name() const {
        return kind == Kind::no_server_run ? "no-server-run" : "key-mismatch";
    }
    nlohmann::json to_json() const;
    bool operator==(const Violation&) const = default;
};

/// Streaming agreement checker. Feed events in trace order; violations are
/// available once the stream ends. Usable directly as a scenario sink.
class AgreementScanner final : public sim::TraceSink {
public:
    void on_event(const sim::TraceEvent& event) override;
    /// Sorts by (session, client) for a deterministic report.
    std::vector<Violation> finish() const;

private:
    struct ClientAccept {
        uint64_t session;
        std::string client;
        std::string key_digest;
    };
    std::vector<ClientAccept> client_accepts_;
    std::map<uint64_t, std::string> server_accepts_;  // session -> key digest
};

/// The agreement property over a recorded trace: every client acceptance of
/// a session key must be matched by a server acceptance of the same key in
/// the same session. An empty result means the trace satisfies agreement.
std::vector<Violation> check_agreement(const sim::Trace& trace);

/// Counter reconciliation: recomputes every RunReport counter from the
/// trace with an independent scan and compares. Also checks that agreement
/// violations equal confirmed reverse trials. Throws UsageError when the
/// trace and report carry different run ids.
struct Reconciliation {
    bool ok = true;
    std::vector<std::string> mismatches;

    nlohmann::json to_json() const;
};

Reconciliation audit_summary(const sim::Trace& trace, const sim::RunReport& report);

}  // namespace pakelab::audit
