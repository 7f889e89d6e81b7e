#include "pakelab/audit/audit.hpp"

#include <algorithm>

#include "pakelab/errors.hpp"

namespace pakelab::audit {

nlohmann::json Violation::to_json() const {
    return {{"session", session},
            {"client", client},
            {"key", key_digest},
            {"kind", std::string(kind_name())}};
}

void AgreementScanner::on_event(const sim::TraceEvent& event) {
    if (event.kind == sim::EventKind::client_accept) {
        client_accepts_.push_back({event.session, event.actor.label(), event.key_digest});
    } else if (event.kind == sim::EventKind::server_accept) {
        server_accepts_.emplace(event.session, event.key_digest);
    }
}

std::vector<Violation> AgreementScanner::finish() const {
    std::vector<Violation> violations;
    for (const auto& accept : client_accepts_) {
        auto it = server_accepts_.find(accept.session);
        if (it == server_accepts_.end()) {
            violations.push_back({accept.session, accept.client, accept.key_digest,
                                  Violation::Kind::no_server_run});
        } else if (it->second != accept.key_digest) {
            violations.push_back({accept.session, accept.client, accept.key_digest,
                                  Violation::Kind::key_mismatch});
        }
    }
    std::sort(violations.begin(), violations.end(),
              [](const Violation& a, const Violation& b) {
                  return std::tie(a.session, a.client) < std::tie(b.session, b.client);
              });
    return violations;
}

std::vector<Violation> check_agreement(const sim::Trace& trace) {
    AgreementScanner scanner;
    for (const auto& event : trace) scanner.on_event(event);
    return scanner.finish();
}

nlohmann::json Reconciliation::to_json() const {
    return {{"ok", ok}, {"mismatches", mismatches}};
}

Reconciliation audit_summary(const sim::Trace& trace, const sim::RunReport& report) {
    // Independent recomputation of every counter the report claims.
    std::string trace_run_id;
    uint64_t reverse = 0, standard = 0, confirmed = 0, refuted = 0, incomplete = 0;
    uint64_t confirmed_reverse = 0;
    uint64_t server_accepts = 0, server_rejects = 0, lockout_refusals = 0, lockouts_engaged = 0;
    uint64_t client_accepts = 0, client_failures = 0, retries = 0;
    uint64_t sessions_started = 0, sessions_dropped = 0;
    std::set<std::string> confirmed_identities;
    std::map<std::string, uint64_t> trials_per_identity;
    bool shared = false;
    uint64_t population = 0;

    for (const auto& e : trace) {
        switch (e.kind) {
            case sim::EventKind::run_meta:
                if (e.meta.contains("run_id")) trace_run_id = e.meta.at("run_id");
                if (e.meta.contains("config")) {
                    shared = e.meta.at("config").value("shared_password", false);
                    if (e.meta.at("config").contains("population"))
                        population =
                            e.meta.at("config").at("population").value("clients", uint64_t{0});
                }
                break;
            case sim::EventKind::trial:
                if (e.mode == "reverse")
                    reverse++;
                else
                    standard++;
                if (e.detail == "confirmed") {
                    confirmed++;
                    confirmed_identities.insert(e.identity);
                    if (e.mode == "reverse") confirmed_reverse++;
                } else if (e.detail == "refuted") {
                    refuted++;
                } else {
                    incomplete++;
                }
                trials_per_identity[e.identity]++;
                break;
            case sim::EventKind::server_accept: server_accepts++; break;
            case sim::EventKind::server_reject: server_rejects++; break;
            case sim::EventKind::client_accept: client_accepts++; break;
            case sim::EventKind::client_reject: client_failures++; break;
            case sim::EventKind::retry: retries++; break;
            case sim::EventKind::session_start: sessions_started++; break;
            case sim::EventKind::session_drop: sessions_dropped++; break;
            case sim::EventKind::lockout:
                if (e.detail == "refused")
                    lockout_refusals++;
                else
                    lockouts_engaged++;
                break;
            default: break;
        }
    }

    if (trace_run_id.empty()) throw UsageError("trace has no run-meta record");
    if (trace_run_id != report.run_id)
        throw UsageError("trace and report run ids differ: " + trace_run_id + " vs " +
                         report.run_id);

    Reconciliation rec;
    auto check = [&](const std::string& field, uint64_t from_trace, uint64_t from_report) {
        if (from_trace != from_report) {
            rec.ok = false;
            rec.mismatches.push_back(field + ": trace=" + std::to_string(from_trace) +
                                     " report=" + std::to_string(from_report));
        }
    };

    check("trials.reverse", reverse, report.trials.reverse);
    check("trials.standard", standard, report.trials.standard);
    check("trials.confirmed", confirmed, report.trials.confirmed);
    check("trials.refuted", refuted, report.trials.refuted);
    check("trials.incomplete", incomplete, report.trials.incomplete);
    check("server.accepts", server_accepts, report.server_accepts);
    check("server.rejects", server_rejects, report.server_rejects);
    check("server.lockout_refusals", lockout_refusals, report.server_lockout_refusals);
    check("server.lockouts_engaged", lockouts_engaged, report.lockouts_engaged);
    check("clients.accepts", client_accepts, report.client_accepts);
    check("clients.failures", client_failures, report.client_failures);
    check("clients.retries", retries, report.retries);
    check("sessions.started", sessions_started, report.sessions_started);
    check("sessions.dropped", sessions_dropped, report.sessions_dropped);

    // Compromise reconciliation: a shared-password confirmation compromises
    // the whole population.
    uint64_t expected_compromised =
        shared && !confirmed_identities.empty() ? population : confirmed_identities.size();
    check("compromised.count", expected_compromised, report.compromised.size());
    if (!shared) {
        for (const auto& identity : report.compromised) {
            if (!confirmed_identities.contains(identity)) {
                rec.ok = false;
                rec.mismatches.push_back("compromised identity without a confirmed trial: " +
                                         identity);
            }
        }
    }

    // Per-client trial histogram.
    uint64_t histogram_total = 0;
    for (uint64_t v : report.per_client_trials) histogram_total += v;
    uint64_t trace_total = 0;
    for (const auto& [identity, count] : trials_per_identity) trace_total += count;
    check("per_client_trials.total", trace_total, histogram_total);

    // Agreement cross-check: violations must equal confirmed reverse trials.
    // Mitigated configurations have zero of both.
    uint64_t violations = check_agreement(trace).size();
    check("agreement.violations_vs_confirmed_reverse", violations, confirmed_reverse);

    return rec;
}

}  // namespace pakelab::audit
