#include "pakelab/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>
#include <variant>

#include "pakelab/errors.hpp"

namespace pakelab::sim {

namespace {

using adversary::BudgetPolicy;
using adversary::GuesserState;
using adversary::IncompleteReason;
using adversary::ReverseEngagement;
using adversary::TrialResult;
using proto::ClientSession;
using proto::Identity;
using proto::Password;
using proto::ProtocolMessage;
using proto::ServerSession;
using proto::StepOutput;

struct LoginEvent {
    uint32_t client;
};
struct DeliverEvent {
    uint64_t session;
    bool to_client;
    ProtocolMessage msg;
};
struct AdversaryTickEvent {};
struct VerifyOnlineEvent {
    uint32_t client;
    Password password;
};

using EventPayload =
    std::variant<LoginEvent, DeliverEvent, AdversaryTickEvent, VerifyOnlineEvent>;

struct QueuedEvent {
    uint64_t time;
    uint64_t order;
    EventPayload payload;
};

struct QueueCompare {
    bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.order > b.order;
    }
};

enum class Route : uint8_t { honest, reverse, standard };

struct LiveSession {
    LiveSession(uint64_t id, Route route, uint32_t client_idx, Identity identity)
        : id(id), route(route), client_idx(client_idx), identity(std::move(identity)) {}

    uint64_t id;
    Route route;
    uint32_t client_idx;        // attacked/authenticating client (reverse/honest)
    Identity identity;          // account under authentication
    std::optional<ClientSession> client;
    std::optional<ServerSession> server;
    std::optional<ReverseEngagement> engagement;
    std::optional<Password> guess;
    std::string guess_key;      // guesser target key (shared-password aware)
    std::string budget_key;
    bool verify_online_followup = false;
};

class ScenarioRun {
public:
    ScenarioRun(const ScenarioConfig& config, TraceSink* sink)
        : config_(config),
          sink_(sink),
          master_(Rng::from_seed(config.seed)),
          registration_rng_(master_.split("registration")),
          store_rng_(master_.split("store")),
          sessions_rng_(master_.split("sessions")),
          guesser_rng_(master_.split("guesser")),
          adversary_rng_(master_.split("adversary")) {}

    RunReport execute();

private:
    // setup
    void build_population();
    void build_adversary();
    void seed_initial_events();

    // event handlers
    void on_login(uint32_t client, uint64_t t);
    void on_deliver(uint64_t session_id, bool to_client, const ProtocolMessage& msg, uint64_t t);
    void on_adversary_tick(uint64_t t);
    void on_verify_online(uint32_t client, const Password& password, uint64_t t);

    // session plumbing
    void start_honest_session(uint32_t client, uint64_t session_id, uint64_t t);
    void start_reverse_session(uint32_t client, uint64_t session_id, uint64_t t);
    uint64_t open_standard_session(const Identity& target, const Password& guess, uint64_t t,
                                   bool verify_followup);
    void finalize_session(LiveSession& s, uint64_t t);
    void handle_trial_result(LiveSession& s, const TrialResult& result, uint64_t t);
    void mark_compromised(uint32_t client_idx);
    void schedule_client_followup(uint32_t client, bool rejected, uint64_t t);
    void drop_session(uint64_t session_id, uint32_t client, uint64_t t, Actor dropper);

    // events + bookkeeping
    void emit(TraceEvent e);
    void schedule(uint64_t t, EventPayload payload);
    Actor session_client_actor(const LiveSession& s) const;
    void note_server_outcome(const Identity& identity, bool accepted, uint64_t t);

    const ScenarioConfig& config_;
    TraceSink* sink_;
    Rng master_, registration_rng_, store_rng_, sessions_rng_, guesser_rng_, adversary_rng_;

    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, QueueCompare> queue_;
    uint64_t order_seq_ = 0;
    uint64_t event_seq_ = 0;
    uint64_t session_seq_ = 0;
    uint64_t max_time_ = 0;

    // population
    std::vector<Identity> identities_;
    std::vector<std::string> endpoints_;
    std::vector<Password> passwords_;
    std::vector<proto::ClientCredential> credentials_;
    std::vector<Rng> client_rngs_;
    std::vector<uint32_t> window_retries_;
    std::vector<bool> compromised_;
    std::unordered_map<std::string, uint32_t> identity_index_;
    bool shared_compromised_ = false;

    std::optional<HonestServer> server_;
    std::optional<GuesserState> guesser_;
    std::optional<BudgetPolicy> budget_;
    std::unordered_map<uint64_t, LiveSession> live_;
    std::set<std::string> inflight_guess_keys_;
    uint32_t standard_target_cursor_ = 0;

    RunReport report_;
};

void ScenarioRun::emit(TraceEvent e) {
    e.seq = event_seq_++;
    max_time_ = std::max(max_time_, e.time);

    // Counter bookkeeping; audit recomputes all of this from the trace.
    switch (e.kind) {
        case EventKind::session_start: report_.sessions_started++; break;
        case EventKind::session_drop: report_.sessions_dropped++; break;
        case EventKind::client_accept: report_.client_accepts++; break;
        case EventKind::client_reject: report_.client_failures++; break;
        case EventKind::server_accept: report_.server_accepts++; break;
        case EventKind::server_reject: report_.server_rejects++; break;
        case EventKind::retry: report_.retries++; break;
        case EventKind::lockout:
            if (e.detail == "refused")
                report_.server_lockout_refusals++;
            else
                report_.lockouts_engaged++;
            break;
        case EventKind::trial: {
            if (e.mode == "reverse")
                report_.trials.reverse++;
            else
                report_.trials.standard++;
            if (e.detail == "confirmed")
                report_.trials.confirmed++;
            else if (e.detail == "refuted")
                report_.trials.refuted++;
            else
                report_.trials.incomplete++;
            auto it = identity_index_.find(e.identity);
            if (it != identity_index_.end()) report_.per_client_trials[it->second]++;
            break;
        }
        default: break;
    }
    if (sink_) sink_->on_event(e);
}

void ScenarioRun::schedule(uint64_t t, EventPayload payload) {
    queue_.push({t, order_seq_++, std::move(payload)});
}

Actor ScenarioRun::session_client_actor(const LiveSession& s) const {
    // In a standard attack the "client" half of the session is the
    // adversary impersonating one.
    return s.route == Route::standard ? Actor::adversary() : Actor::client(s.client_idx);
}

void ScenarioRun::build_population() {
    proto::AccountStore store(config_.protocol, config_.group, store_rng_);
    store.set_simulate_unknown(config_.simulate_unknown_accounts);
    store.set_envelope_secret_policy(config_.mitigations.envelope_secret);
    if (config_.protocol == proto::ProtocolId::srp6a_cert) store.ensure_server_keys(store_rng_);

    adversary::Dictionary source = config_.population.passwords.load();
    std::vector<double> cumulative;
    double total = 0;
    if (config_.population.assignment == "zipf") {
        for (size_t rank = 0; rank < source.size(); rank++) {
            total += std::pow(static_cast<double>(rank + 1), -config_.population.zipf_exponent);
            cumulative.push_back(total);
        }
    }
    auto draw_rank = [&](Rng& rng) -> size_t {
        double x = rng.next_unit() * total;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), x);
        return std::min<size_t>(it - cumulative.begin(), source.size() - 1);
    };

    std::optional<Password> shared;
    if (config_.shared_password) {
        if (config_.population.assignment == "zipf")
            shared = Password(source.password(draw_rank(registration_rng_)));
        else
            shared = Password(source.password(0));
    }

    proto::RegistrationOptions options{.envelope_secret = config_.mitigations.envelope_secret};
    uint32_t n = config_.population.clients;
    for (uint32_t i = 0; i < n; i++) {
        Identity identity("client-" + std::to_string(i));
        Password password = shared            ? *shared
                            : config_.population.assignment == "zipf"
                                ? Password(source.password(draw_rank(registration_rng_)))
                                : Password(source.password(i % source.size()));
        auto reg = store.register_account(identity, password, options, registration_rng_);
        identities_.push_back(identity);
        endpoints_.push_back("endpoint-" + std::to_string(i));
        passwords_.push_back(password);
        credentials_.push_back(reg.credential);
        client_rngs_.push_back(master_.split("client:" + std::to_string(i)));
        identity_index_[identity.name] = i;
    }
    window_retries_.assign(n, 0);
    compromised_.assign(n, false);
    report_.per_client_trials.assign(n, 0);
    report_.population = n;

    server_.emplace(std::move(store), config_.defenses);
}

void ScenarioRun::build_adversary() {
    if (config_.adversary.attack == AttackMode::none) return;
    guesser_.emplace(config_.adversary.strategy, config_.adversary.dictionary.load(),
                     guesser_rng_.split("draws"));
    budget_.emplace(config_.adversary.budget, guesser_rng_.next_u64());
}

void ScenarioRun::seed_initial_events() {
    for (uint32_t i = 0; i < config_.population.clients; i++) {
        uint64_t start = client_rngs_[i].below(config_.client_behavior.login_interval);
        schedule(start, LoginEvent{i});
    }
    if (config_.adversary.attack == AttackMode::standard) schedule(0, AdversaryTickEvent{});
}

void ScenarioRun::drop_session(uint64_t session_id, uint32_t client, uint64_t t, Actor dropper) {
    TraceEvent e;
    e.time = t;
    e.kind = EventKind::session_drop;
    e.actor = dropper;
    e.session = session_id;
    e.identity = identities_[client].name;
    emit(e);
    schedule_client_followup(client, false, t);
}

void ScenarioRun::on_login(uint32_t client, uint64_t t) {
    if (t >= config_.horizon) return;

    uint64_t session_id = ++session_seq_;
    Rng route_rng = sessions_rng_.split("route:" + std::to_string(session_id));
    bool intercepted = config_.adversary.attack == AttackMode::reverse &&
                       route_rng.next_unit() < config_.interception;

    TraceEvent start;
    start.time = t;
    start.kind = EventKind::session_start;
    start.actor = Actor::client(client);
    start.session = session_id;
    start.identity = identities_[client].name;
    start.detail = intercepted ? "adversary" : "server";
    emit(start);

    if (intercepted)
        start_reverse_session(client, session_id, t);
    else
        start_honest_session(client, session_id, t);
}

void ScenarioRun::start_honest_session(uint32_t client, uint64_t session_id, uint64_t t) {
    const Identity& identity = identities_[client];
    if (server_->locked(identity, t)) {
        server_->note_lockout_refusal();
        TraceEvent e;
        e.time = t;
        e.kind = EventKind::lockout;
        e.actor = Actor::server();
        e.session = session_id;
        e.identity = identity.name;
        e.detail = "refused";
        emit(e);
        drop_session(session_id, client, t, Actor::server());
        return;
    }

    LiveSession s(session_id, Route::honest, client, identity);
    Rng rng = sessions_rng_.split("honest:" + std::to_string(session_id));
    s.client.emplace(credentials_[client], config_.group, rng.split("client"));
    s.server.emplace(server_->open_session(rng.split("server")));

    ProtocolMessage first = s.client->start();
    TraceEvent send;
    send.time = t;
    send.kind = EventKind::msg_send;
    send.actor = Actor::client(client);
    send.session = session_id;
    send.detail = std::string(proto::msg_kind_name(first.kind));
    emit(send);
    schedule(t + 1, DeliverEvent{session_id, false, std::move(first)});
    live_.emplace(session_id, std::move(s));
}

void ScenarioRun::start_reverse_session(uint32_t client, uint64_t session_id, uint64_t t) {
    const Identity& identity = identities_[client];
    std::string guess_key = config_.shared_password ? "*network*" : identity.name;

    bool done = config_.shared_password ? shared_compromised_ : compromised_[client];
    if (done || inflight_guess_keys_.contains(guess_key)) {
        drop_session(session_id, client, t, Actor::adversary());
        return;
    }
    std::string budget_key = budget_->client_key(identity, endpoints_[client]);
    if (!budget_->allow_trial(budget_key, t)) {
        drop_session(session_id, client, t, Actor::adversary());
        return;
    }
    auto guess = guesser_->next_guess(Identity(guess_key));
    if (!guess) {
        drop_session(session_id, client, t, Actor::adversary());
        return;
    }
    budget_->note_trial(budget_key, t);
    inflight_guess_keys_.insert(guess_key);

    LiveSession s(session_id, Route::reverse, client, identity);
    s.guess = guess;
    s.guess_key = guess_key;
    s.budget_key = budget_key;
    Rng rng = sessions_rng_.split("reverse:" + std::to_string(session_id));
    s.client.emplace(credentials_[client], config_.group, rng.split("client"));
    proto::RegistrationOptions deployment{.envelope_secret = config_.mitigations.envelope_secret};
    s.engagement.emplace(config_.protocol, config_.group, identity, *guess, deployment,
                         rng.split("adversary"));

    TraceEvent forge;
    forge.time = t;
    forge.kind = EventKind::forge;
    forge.actor = Actor::adversary();
    forge.session = session_id;
    forge.identity = identity.name;
    forge.detail = std::string(proto::to_string(config_.protocol));
    emit(forge);

    ProtocolMessage first = s.client->start();
    TraceEvent send;
    send.time = t;
    send.kind = EventKind::msg_send;
    send.actor = Actor::client(client);
    send.session = session_id;
    send.detail = std::string(proto::msg_kind_name(first.kind));
    emit(send);
    schedule(t + 1, DeliverEvent{session_id, false, std::move(first)});
    live_.emplace(session_id, std::move(s));
}

uint64_t ScenarioRun::open_standard_session(const Identity& target, const Password& guess,
                                            uint64_t t, bool verify_followup) {
    uint64_t session_id = ++session_seq_;
    TraceEvent start;
    start.time = t;
    start.kind = EventKind::session_start;
    start.actor = Actor::adversary();
    start.session = session_id;
    start.identity = target.name;
    start.detail = "standard";
    emit(start);

    LiveSession s(session_id, Route::standard, identity_index_.at(target.name), target);
    s.guess = guess;
    s.guess_key = target.name;
    s.verify_online_followup = verify_followup;

    proto::ClientCredential cred{config_.protocol, target, guess, std::nullopt, std::nullopt};
    if (config_.protocol == proto::ProtocolId::srp6a_cert)
        cred.pinned_server_key = server_->store().server_keys()->verifying;

    Rng rng = sessions_rng_.split("standard:" + std::to_string(session_id));
    s.client.emplace(std::move(cred), config_.group, rng.split("client"));
    s.server.emplace(server_->open_session(rng.split("server")));

    ProtocolMessage first = s.client->start();
    TraceEvent send;
    send.time = t;
    send.kind = EventKind::msg_send;
    send.actor = Actor::adversary();
    send.session = session_id;
    send.detail = std::string(proto::msg_kind_name(first.kind));
    emit(send);
    schedule(t + 1, DeliverEvent{session_id, false, std::move(first)});
    live_.emplace(session_id, std::move(s));
    return session_id;
}

void ScenarioRun::on_deliver(uint64_t session_id, bool to_client, const ProtocolMessage& msg,
                             uint64_t t) {
    auto it = live_.find(session_id);
    if (it == live_.end()) throw UsageError("delivery to a dead session");
    LiveSession& s = it->second;

    Actor receiver = to_client ? session_client_actor(s)
                     : s.route == Route::reverse ? Actor::adversary()
                                                 : Actor::server();
    TraceEvent recv;
    recv.time = t;
    recv.kind = EventKind::msg_recv;
    recv.actor = receiver;
    recv.session = session_id;
    recv.detail = std::string(proto::msg_kind_name(msg.kind));
    emit(recv);

    StepOutput out;
    if (to_client)
        out = s.client->step(msg);
    else if (s.route == Route::reverse)
        out = s.engagement->step(msg);
    else
        out = s.server->step(msg);

    if (out.reply) {
        TraceEvent send;
        send.time = t;
        send.kind = EventKind::msg_send;
        send.actor = receiver;
        send.session = session_id;
        send.detail = std::string(proto::msg_kind_name(out.reply->kind));
        emit(send);
        schedule(t + 1, DeliverEvent{session_id, !to_client, std::move(*out.reply)});
    }

    if (out.outcome) {
        if (to_client) {
            TraceEvent e;
            e.time = t;
            e.actor = receiver;
            e.session = session_id;
            e.identity = s.identity.name;
            if (out.outcome->accepted()) {
                e.kind = EventKind::client_accept;
                e.key_digest = out.outcome->key().digest().hex();
            } else {
                e.kind = EventKind::client_reject;
                e.detail = std::string(proto::to_string(out.outcome->reason()));
            }
            emit(e);
        } else if (s.route != Route::reverse) {
            TraceEvent e;
            e.time = t;
            e.actor = Actor::server();
            e.session = session_id;
            e.identity = s.identity.name;
            if (out.outcome->accepted()) {
                e.kind = EventKind::server_accept;
                e.key_digest = out.outcome->key().digest().hex();
            } else {
                e.kind = EventKind::server_reject;
                e.detail = std::string(proto::to_string(out.outcome->reason()));
            }
            emit(e);
            note_server_outcome(s.identity, out.outcome->accepted(), t);
        }
        // The adversary's fake-server outcome is internal: no server event
        // exists for it anywhere in the trace.
    }

    bool client_terminal = s.client->terminal();
    bool peer_terminal = s.route == Route::reverse ? s.engagement->terminal()
                                                   : s.server->terminal();
    if (client_terminal && peer_terminal) {
        finalize_session(s, t);
        live_.erase(session_id);
        return;
    }
    if (!out.reply && (client_terminal != peer_terminal)) {
        // One side is done, the other is hanging: the connection closes.
        Actor closer = client_terminal
                           ? session_client_actor(s)
                           : (s.route == Route::reverse ? Actor::adversary() : Actor::server());
        TraceEvent send;
        send.time = t;
        send.kind = EventKind::msg_send;
        send.actor = closer;
        send.session = session_id;
        send.detail = std::string(proto::msg_kind_name(proto::MsgKind::session_close));
        emit(send);
        schedule(t + 1, DeliverEvent{session_id, !client_terminal, ProtocolMessage::close()});
    }
}

void ScenarioRun::note_server_outcome(const Identity& identity, bool accepted, uint64_t t) {
    auto locked_until = server_->note_outcome(identity, accepted, t);
    if (locked_until) {
        TraceEvent e;
        e.time = t;
        e.kind = EventKind::lockout;
        e.actor = Actor::server();
        e.identity = identity.name;
        e.detail = "until:" + std::to_string(*locked_until);
        emit(e);
    }
}

void ScenarioRun::mark_compromised(uint32_t client_idx) {
    if (config_.shared_password) {
        if (!shared_compromised_) {
            shared_compromised_ = true;
            for (uint32_t i = 0; i < compromised_.size(); i++) {
                compromised_[i] = true;
                report_.compromised.push_back(identities_[i].name);
            }
        }
        return;
    }
    if (!compromised_[client_idx]) {
        compromised_[client_idx] = true;
        report_.compromised.push_back(identities_[client_idx].name);
    }
}

void ScenarioRun::handle_trial_result(LiveSession& s, const TrialResult& result, uint64_t t) {
    TraceEvent e;
    e.time = t;
    e.kind = EventKind::trial;
    e.actor = Actor::adversary();
    e.session = s.id;
    e.identity = s.identity.name;
    e.guess = s.guess->text;
    e.mode = s.route == Route::reverse ? "reverse" : "standard";
    e.detail = result.label();
    emit(e);

    guesser_->feedback(Identity(s.guess_key), *s.guess, result);
    if (result.is_confirmed()) {
        mark_compromised(s.client_idx);
        if (s.route == Route::reverse && config_.adversary.verify_online)
            schedule(t + 1, VerifyOnlineEvent{s.client_idx, *s.guess});
    }
}

void ScenarioRun::schedule_client_followup(uint32_t client, bool rejected, uint64_t t) {
    if (rejected && window_retries_[client] < config_.client_behavior.max_retries &&
        client_rngs_[client].next_unit() < config_.client_behavior.retry_probability) {
        window_retries_[client]++;
        TraceEvent e;
        e.time = t;
        e.kind = EventKind::retry;
        e.actor = Actor::client(client);
        e.identity = identities_[client].name;
        e.detail = "attempt:" + std::to_string(window_retries_[client]);
        emit(e);
        schedule(t + 1, LoginEvent{client});
        return;
    }
    window_retries_[client] = 0;
    schedule(t + config_.client_behavior.login_interval, LoginEvent{client});
}

void ScenarioRun::finalize_session(LiveSession& s, uint64_t t) {
    switch (s.route) {
        case Route::reverse: {
            inflight_guess_keys_.erase(s.guess_key);
            TrialResult result =
                s.engagement->conclude(s.client->outcome(), passwords_[s.client_idx]);
            handle_trial_result(s, result, t);
            bool rejected = s.client->outcome() && !(*s.client->outcome()).accepted();
            schedule_client_followup(s.client_idx, rejected, t);
            break;
        }
        case Route::honest: {
            bool rejected = s.client->outcome() && !(*s.client->outcome()).accepted();
            schedule_client_followup(s.client_idx, rejected, t);
            break;
        }
        case Route::standard: {
            bool confirmed = s.server->outcome() && (*s.server->outcome()).accepted();
            TrialResult result = confirmed ? TrialResult::confirmed(*s.guess)
                                           : TrialResult::refuted(*s.guess);
            handle_trial_result(s, result, t);
            if (!s.verify_online_followup) schedule(t + 1, AdversaryTickEvent{});
            break;
        }
    }
}

void ScenarioRun::on_adversary_tick(uint64_t t) {
    if (t >= config_.horizon) return;

    // Serial round-robin attacker: one account at a time, skipping targets
    // that are exhausted, already cracked, or out of budget.
    uint32_t n = config_.population.clients;
    for (uint32_t step = 0; step < n; step++) {
        uint32_t idx = (standard_target_cursor_ + step) % n;
        const Identity& target = identities_[idx];
        if (compromised_[idx]) continue;
        std::string budget_key = budget_->client_key(target, endpoints_[idx]);
        if (!budget_->allow_trial(budget_key, t)) continue;
        auto guess = guesser_->next_guess(target);
        if (!guess) continue;

        standard_target_cursor_ = (idx + 1) % n;
        if (server_->locked(target, t)) {
            server_->note_lockout_refusal();
            TraceEvent e;
            e.time = t;
            e.kind = EventKind::lockout;
            e.actor = Actor::server();
            e.identity = target.name;
            e.detail = "refused";
            emit(e);
            TraceEvent trial;
            trial.time = t;
            trial.kind = EventKind::trial;
            trial.actor = Actor::adversary();
            trial.identity = target.name;
            trial.guess = guess->text;
            trial.mode = "standard";
            trial.detail = TrialResult::incomplete(IncompleteReason::locked_out).label();
            emit(trial);
            schedule(t + 1, AdversaryTickEvent{});
            return;
        }
        budget_->note_trial(budget_key, t);
        open_standard_session(target, *guess, t, false);
        return;  // next tick scheduled when the session finalizes
    }

    // Nothing attackable right now. If budgets reset, wake at the boundary.
    if (config_.adversary.budget.reset_period > 0) {
        uint64_t next = (t / config_.adversary.budget.reset_period + 1) *
                        config_.adversary.budget.reset_period;
        if (next < config_.horizon) schedule(next, AdversaryTickEvent{});
    }
}

void ScenarioRun::on_verify_online(uint32_t client, const Password& password, uint64_t t) {
    open_standard_session(identities_[client], password, t, true);
}

RunReport ScenarioRun::execute() {
    report_.run_id = config_.run_id();
    report_.seed = config_.seed;
    report_.config_echo = config_.echo();

    build_population();
    build_adversary();

    TraceEvent meta;
    meta.time = 0;
    meta.kind = EventKind::run_meta;
    meta.actor = Actor::simulator();
    meta.meta = {{"run_id", report_.run_id},
                 {"seed", config_.seed},
                 {"config", report_.config_echo}};
    emit(meta);

    seed_initial_events();

    while (!queue_.empty()) {
        QueuedEvent ev = queue_.top();
        queue_.pop();
        std::visit(
            [&](auto&& payload) {
                using T = std::decay_t<decltype(payload)>;
                if constexpr (std::is_same_v<T, LoginEvent>) {
                    on_login(payload.client, ev.time);
                } else if constexpr (std::is_same_v<T, DeliverEvent>) {
                    on_deliver(payload.session, payload.to_client, payload.msg, ev.time);
                } else if constexpr (std::is_same_v<T, AdversaryTickEvent>) {
                    on_adversary_tick(ev.time);
                } else if constexpr (std::is_same_v<T, VerifyOnlineEvent>) {
                    on_verify_online(payload.client, payload.password, ev.time);
                }
            },
            ev.payload);
    }

    report_.simulated_duration = max_time_;
    return report_;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config, TraceSink* sink) {
    config.validate();
    ScenarioRun run(config, sink);
    return run.execute();
}

std::pair<RunReport, Trace> run_scenario_with_trace(const ScenarioConfig& config) {
    VectorTrace sink;
    RunReport report = run_scenario(config, &sink);
    return {std::move(report), std::move(sink.events)};
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["run_id"] = run_id;
    j["seed"] = seed;
    j["config"] = config_echo;
    j["population"] = population;
    j["simulated_duration"] = simulated_duration;
    j["compromised"] = {{"count", compromised.size()}, {"identities", compromised}};
    j["trials"] = {{"reverse", trials.reverse},
                   {"standard", trials.standard},
                   {"confirmed", trials.confirmed},
                   {"refuted", trials.refuted},
                   {"incomplete", trials.incomplete}};
    j["server"] = {{"accepts", server_accepts},
                   {"rejects", server_rejects},
                   {"lockout_refusals", server_lockout_refusals},
                   {"lockouts_engaged", lockouts_engaged}};
    j["clients"] = {{"accepts", client_accepts},
                    {"failures", client_failures},
                    {"retries", retries}};
    j["sessions"] = {{"started", sessions_started}, {"dropped", sessions_dropped}};
    j["per_client_trials"] = per_client_trials;
    return j;
}

RunReport RunReport::from_json(const nlohmann::json& j) {
    RunReport r;
    try {
        r.run_id = j.at("run_id").get<std::string>();
        r.seed = j.at("seed").get<uint64_t>();
        r.config_echo = j.at("config");
        r.population = j.at("population").get<uint32_t>();
        r.simulated_duration = j.at("simulated_duration").get<uint64_t>();
        r.compromised = j.at("compromised").at("identities").get<std::vector<std::string>>();
        const auto& trials = j.at("trials");
        r.trials.reverse = trials.at("reverse").get<uint64_t>();
        r.trials.standard = trials.at("standard").get<uint64_t>();
        r.trials.confirmed = trials.at("confirmed").get<uint64_t>();
        r.trials.refuted = trials.at("refuted").get<uint64_t>();
        r.trials.incomplete = trials.at("incomplete").get<uint64_t>();
        const auto& server = j.at("server");
        r.server_accepts = server.at("accepts").get<uint64_t>();
        r.server_rejects = server.at("rejects").get<uint64_t>();
        r.server_lockout_refusals = server.at("lockout_refusals").get<uint64_t>();
        r.lockouts_engaged = server.at("lockouts_engaged").get<uint64_t>();
        const auto& clients = j.at("clients");
        r.client_accepts = clients.at("accepts").get<uint64_t>();
        r.client_failures = clients.at("failures").get<uint64_t>();
        r.retries = clients.at("retries").get<uint64_t>();
        const auto& sessions = j.at("sessions");
        r.sessions_started = sessions.at("started").get<uint64_t>();
        r.sessions_dropped = sessions.at("dropped").get<uint64_t>();
        r.per_client_trials = j.at("per_client_trials").get<std::vector<uint64_t>>();
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("bad run report: ") + ex.what());
    }
    return r;
}

std::string RunReport::csv_header() {
    return "seed,run_id,population,compromised,compromise_rate,reverse_trials,standard_trials,"
           "confirmed,refuted,incomplete,server_accepts,server_rejects,lockout_refusals,"
           "client_accepts,client_failures,sessions_started,sessions_dropped";
}

std::string RunReport::csv_row() const {
    std::string row;
    row += std::to_string(seed) + "," + run_id + "," + std::to_string(population) + ",";
    row += std::to_string(compromised.size()) + ",";
    char rate[32];
    std::snprintf(rate, sizeof(rate), "%.6f", compromise_rate());
    row += std::string(rate) + ",";
    row += std::to_string(trials.reverse) + "," + std::to_string(trials.standard) + ",";
    row += std::to_string(trials.confirmed) + "," + std::to_string(trials.refuted) + ",";
    row += std::to_string(trials.incomplete) + ",";
    row += std::to_string(server_accepts) + "," + std::to_string(server_rejects) + ",";
    row += std::to_string(server_lockout_refusals) + ",";
    row += std::to_string(client_accepts) + "," + std::to_string(client_failures) + ",";
    row += std::to_string(sessions_started) + "," + std::to_string(sessions_dropped);
    return row;
}

namespace {

FieldStats stats_of(const std::vector<double>& xs) {
    FieldStats s;
    if (xs.empty()) return s;
    double sum = 0;
    for (double x : xs) sum += x;
    s.mean = sum / xs.size();
    double var = 0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    var = xs.size() > 1 ? var / (xs.size() - 1) : 0.0;
    s.stddev = std::sqrt(var);
    double half = 1.96 * s.stddev / std::sqrt(static_cast<double>(xs.size()));
    s.ci95_lo = s.mean - half;
    s.ci95_hi = s.mean + half;
    return s;
}

nlohmann::json stats_json(const FieldStats& s) {
    return {{"mean", s.mean},
            {"stddev", s.stddev},
            {"ci95", {s.ci95_lo, s.ci95_hi}}};
}

}  // namespace

AggregateReport aggregate(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw UsageError("nothing to aggregate");
    for (const auto& r : reports)
        if (r.config_echo != reports.front().config_echo)
            throw UsageError("cannot aggregate reports from different configs");

    auto collect = [&](auto&& get) {
        std::vector<double> xs;
        xs.reserve(reports.size());
        for (const auto& r : reports) xs.push_back(get(r));
        return stats_of(xs);
    };

    AggregateReport agg;
    agg.runs = reports.size();
    agg.compromise_rate = collect([](const RunReport& r) { return r.compromise_rate(); });
    agg.compromised_count =
        collect([](const RunReport& r) { return static_cast<double>(r.compromised.size()); });
    agg.reverse_trials =
        collect([](const RunReport& r) { return static_cast<double>(r.trials.reverse); });
    agg.standard_trials =
        collect([](const RunReport& r) { return static_cast<double>(r.trials.standard); });
    agg.confirmed_trials =
        collect([](const RunReport& r) { return static_cast<double>(r.trials.confirmed); });
    agg.server_failures =
        collect([](const RunReport& r) { return static_cast<double>(r.server_rejects); });
    agg.client_failures =
        collect([](const RunReport& r) { return static_cast<double>(r.client_failures); });
    return agg;
}

nlohmann::json AggregateReport::to_json() const {
    return {{"runs", runs},
            {"compromise_rate", stats_json(compromise_rate)},
            {"compromised_count", stats_json(compromised_count)},
            {"reverse_trials", stats_json(reverse_trials)},
            {"standard_trials", stats_json(standard_trials)},
            {"confirmed_trials", stats_json(confirmed_trials)},
            {"server_failures", stats_json(server_failures)},
            {"client_failures", stats_json(client_failures)}};
}

}  // namespace pakelab::sim
