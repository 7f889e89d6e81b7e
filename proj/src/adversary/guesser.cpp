#include "pakelab/adversary/guesser.hpp"

#include <fstream>

#include "pakelab/errors.hpp"

namespace pakelab::adversary {

Strategy strategy_from_string(std::string_view name) {
    if (name == "dictionary") return Strategy::dictionary;
    if (name == "spray") return Strategy::spray;
    if (name == "weighted") return Strategy::weighted;
    throw ConfigError("unknown guess strategy: " + std::string(name));
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::dictionary: return "dictionary";
        case Strategy::spray: return "spray";
        case Strategy::weighted: return "weighted";
    }
    return "unknown";
}

Dictionary Dictionary::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dictionary file: " + path);
    std::vector<std::pair<std::string, double>> entries;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            entries.emplace_back(line, 0.0);  // weight filled in below
        } else {
            std::string pw = line.substr(0, tab);
            if (pw.empty())
                throw ConfigError(path + ":" + std::to_string(line_no) + ": empty password");
            try {
                entries.emplace_back(pw, std::stod(line.substr(tab + 1)));
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": bad weight");
            }
        }
    }
    if (entries.empty()) throw ConfigError("dictionary file is empty: " + path);
    for (size_t i = 0; i < entries.size(); i++)
        if (entries[i].second == 0.0) entries[i].second = 1.0 / static_cast<double>(i + 1);
    return from_weighted(std::move(entries));
}

Dictionary Dictionary::from_list(std::vector<std::string> passwords) {
    std::vector<std::pair<std::string, double>> entries;
    entries.reserve(passwords.size());
    for (size_t i = 0; i < passwords.size(); i++)
        entries.emplace_back(std::move(passwords[i]), 1.0 / static_cast<double>(i + 1));
    return from_weighted(std::move(entries));
}

Dictionary Dictionary::from_weighted(std::vector<std::pair<std::string, double>> entries) {
    if (entries.empty()) throw ConfigError("dictionary must be nonempty");
    Dictionary d;
    for (auto& [pw, weight] : entries) {
        if (pw.empty()) throw ConfigError("dictionary contains an empty password");
        if (!(weight > 0)) throw ConfigError("dictionary weights must be positive");
        if (d.ranks_.contains(pw)) continue;  // first occurrence wins
        d.ranks_.emplace(pw, d.passwords_.size());
        d.passwords_.push_back(std::move(pw));
        d.weights_.push_back(weight);
    }
    return d;
}

std::optional<size_t> Dictionary::rank_of(const std::string& password) const {
    auto it = ranks_.find(password);
    if (it == ranks_.end()) return std::nullopt;
    return it->second;
}

GuesserState::GuesserState(Strategy strategy, Dictionary dictionary, Rng rng)
    : strategy_(strategy), dictionary_(std::move(dictionary)), rng_(std::move(rng)) {}

GuesserState::TargetHistory& GuesserState::history(const proto::Identity& target) {
    auto it = targets_.find(target);
    if (it == targets_.end()) {
        TargetHistory h;
        if (strategy_ == Strategy::weighted) h.draw_rng = rng_.split("target:" + target.name);
        it = targets_.emplace(target, std::move(h)).first;
    }
    return it->second;
}

std::optional<proto::Password> GuesserState::next_guess(const proto::Identity& target) {
    TargetHistory& h = history(target);
    if (h.confirmed) return std::nullopt;  // nothing left to learn
    if (h.refuted.size() >= dictionary_.size()) return std::nullopt;

    if (strategy_ == Strategy::weighted) {
        // Weighted draw without replacement over the untried entries.
        double total = 0;
        for (size_t rank = 0; rank < dictionary_.size(); rank++)
            if (!h.refuted.contains(rank)) total += dictionary_.weight(rank);
        double x = h.draw_rng->next_unit() * total;
        for (size_t rank = 0; rank < dictionary_.size(); rank++) {
            if (h.refuted.contains(rank)) continue;
            x -= dictionary_.weight(rank);
            if (x <= 0) return proto::Password(dictionary_.password(rank));
        }
        // Floating-point underrun: fall through to the last untried entry.
        for (size_t rank = dictionary_.size(); rank-- > 0;)
            if (!h.refuted.contains(rank)) return proto::Password(dictionary_.password(rank));
        return std::nullopt;
    }

    // dictionary/spray: strict rank order.
    for (size_t rank = 0; rank < dictionary_.size(); rank++)
        if (!h.refuted.contains(rank)) return proto::Password(dictionary_.password(rank));
    return std::nullopt;
}

void GuesserState::feedback(const proto::Identity& target, const proto::Password& guess,
                            const TrialResult& result) {
    auto rank = dictionary_.rank_of(guess.text);
    if (!rank) return;
    TargetHistory& h = history(target);
    if (result.is_confirmed()) {
        h.confirmed = *rank;
    } else if (result.looks_refuted()) {
        // Includes confirmation-rejected trials: on the wire the adversary
        // cannot tell them from a wrong guess, so the (possibly correct)
        // guess is discarded.
        h.refuted.insert(*rank);
    }
}

std::optional<proto::Password> GuesserState::found(const proto::Identity& target) const {
    auto it = targets_.find(target);
    if (it == targets_.end() || !it->second.confirmed) return std::nullopt;
    return proto::Password(dictionary_.password(*it->second.confirmed));
}

size_t GuesserState::refuted_count(const proto::Identity& target) const {
    auto it = targets_.find(target);
    return it == targets_.end() ? 0 : it->second.refuted.size();
}

}  // namespace pakelab::adversary
