#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "pakelab/adversary/trial.hpp"
#include "pakelab/proto/types.hpp"

namespace pakelab::adversary {

enum class Strategy { dictionary, spray, weighted };

Strategy strategy_from_string(std::string_view name);
std::string_view to_string(Strategy s);

/// Rank-ordered password list; rank order is priority. Weights default to
/// the classic 1/rank when no explicit column is given.
class Dictionary {
public:
    static Dictionary from_file(const std::string& path);
    static Dictionary from_list(std::vector<std::string> passwords);
    static Dictionary from_weighted(std::vector<std::pair<std::string, double>> entries);

    size_t size() const { return passwords_.size(); }
    const std::string& password(size_t rank) const { return passwords_[rank]; }
    double weight(size_t rank) const { return weights_[rank]; }
    std::optional<size_t> rank_of(const std::string& password) const;

private:
    std::vector<std::string> passwords_;
    std::vector<double> weights_;
    std::unordered_map<std::string, size_t> ranks_;
};

/// Guess source with per-target history. A guess refuted for a target is
/// never offered again for that target; a trial that tested nothing
/// (lockout, missing signature) leaves the guess available.
class GuesserState {
public:
    GuesserState(Strategy strategy, Dictionary dictionary, Rng rng);

    /// Highest-priority untried guess for this target, or nothing when the
    /// dictionary is exhausted or the target's password was already found.
    std::optional<proto::Password> next_guess(const proto::Identity& target);

    void feedback(const proto::Identity& target, const proto::Password& guess,
                  const TrialResult& result);

    std::optional<proto::Password> found(const proto::Identity& target) const;
    size_t refuted_count(const proto::Identity& target) const;
    const Dictionary& dictionary() const { return dictionary_; }

private:
    struct TargetHistory {
        std::set<size_t> refuted;
        std::optional<size_t> confirmed;
        std::optional<Rng> draw_rng;  // weighted strategy only
    };
    TargetHistory& history(const proto::Identity& target);

    Strategy strategy_;
    Dictionary dictionary_;
    Rng rng_;
    std::map<proto::Identity, TargetHistory> targets_;
};

}  // namespace pakelab::adversary
