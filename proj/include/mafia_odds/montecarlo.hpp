#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/random/uniform_int_distribution.hpp>

#include "core.hpp"
#include "evolution.hpp"

namespace mafia_odds {

/// SplitMix64 (Steele, Lea, Flood 2014). Satisfies UniformRandomBitGenerator.
///
/// Every trial gets its own stream keyed by (seed, trial index), see
/// `trial_stream`. This keying and the bounded draw in `random_lynch` are
/// part of the reproducibility contract: changing either changes every
/// published estimate.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        state_ += golden_gamma;
        return mix(state_);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

private:
    std::uint64_t state_;
};

inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
    return SplitMix64(SplitMix64::mix(seed ^ SplitMix64::mix(trial + SplitMix64::golden_gamma)));
}

enum class Side { Mafia, Citizens };

inline const char* to_string(Side side) { return side == Side::Mafia ? "mafia" : "citizens"; }

struct Trajectory {
    std::vector<GameState> states;
    Side winner = Side::Citizens;
};

struct SimulationReport {
    int n = 0;
    int m = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t mafia_wins = 0;
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Empirical counterpart of `Distribution`.
struct EmpiricalDistribution {
    int N = 0;
    int M = 0;
    int t = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> counts;
    std::vector<double> probs;
};

/// Day phase: a uniformly random living player is lynched, so a mafioso dies
/// with probability m/n.
template <typename Rng>
GameState random_lynch(GameState s, Rng& rng) {
    if (s.n < 1) throw std::invalid_argument("random_lynch: nobody left to lynch");
    boost::random::uniform_int_distribution<int> pick(0, s.n - 1);
    const bool mafioso = pick(rng) < s.m;
    return {s.n - 1, mafioso ? s.m - 1 : s.m};
}

/// Night phase: mafia remove one citizen. Citizens are interchangeable so no
/// draw is needed.
inline GameState night_kill(GameState s) {
    if (s.n - s.m < 1) throw std::invalid_argument("night_kill: no citizen left");
    return {s.n - 1, s.m};
}

inline std::optional<Side> game_outcome(GameState s, BoundaryRule boundary) {
    if (s.m == 0) return Side::Citizens;
    if (mafia_has_won(s, boundary)) return Side::Mafia;
    return std::nullopt;
}

/// Plays one game to the end, reporting each turn-boundary state (and the
/// mid-turn state when the game ends after a lynch) to `on_state`.
template <typename Rng, typename Observer>
Side play_game(GameState s, BoundaryRule boundary, Rng& rng, Observer&& on_state) {
    require_valid(s);
    on_state(s);
    for (;;) {
        if (auto done = game_outcome(s, boundary)) return *done;
        s = random_lynch(s, rng);
        if (auto done = game_outcome(s, boundary)) {
            on_state(s);
            return *done;
        }
        s = night_kill(s);
        on_state(s);
    }
}

template <typename Rng>
Trajectory simulate_game(int n, int m, BoundaryRule boundary, Rng& rng) {
    Trajectory out;
    out.winner = play_game({n, m}, boundary, rng, [&](GameState s) { out.states.push_back(s); });
    return out;
}

/// Worker count from MAFIA_ODDS_THREADS; unset or 0 means one per core.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("MAFIA_ODDS_THREADS")) {
        char* end = nullptr;
        const unsigned long value = std::strtoul(env, &end, 10);
        if (end != env && value > 0) return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

/// Runs body(first, last, slot) over contiguous blocks of [0, trials) and
/// returns the per-slot results in block order.
template <typename Accumulator, typename Body>
std::vector<Accumulator> for_trial_blocks(std::uint64_t trials, unsigned threads, Accumulator init, Body body) {
    if (threads == 0) threads = default_thread_count();
    const auto workers = static_cast<unsigned>(std::clamp<std::uint64_t>(trials, 1, threads));
    std::vector<Accumulator> partial(workers, init);
    const std::uint64_t block = (trials + workers - 1) / workers;
    auto run = [&](unsigned w) {
        const std::uint64_t first = std::min(trials, w * block);
        const std::uint64_t last = std::min(trials, first + block);
        body(first, last, partial[w]);
    };
    if (workers == 1) {
        run(0);
        return partial;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    pool.clear();
    return partial;
}

}  // namespace detail

/// Monte Carlo estimate of w(n, m). Bit-identical for a given
/// (n, m, boundary, trials, seed) whatever the thread count.
inline SimulationReport estimate_win_chance(int n, int m, BoundaryRule boundary, std::uint64_t trials,
                                            std::uint64_t seed, unsigned threads = 0) {
    require_valid({n, m});
    if (trials < 1) throw std::invalid_argument("estimate_win_chance: need trials >= 1");

    const auto partial = detail::for_trial_blocks<std::uint64_t>(
        trials, threads, 0, [&](std::uint64_t first, std::uint64_t last, std::uint64_t& wins) {
            for (std::uint64_t i = first; i < last; ++i) {
                auto rng = trial_stream(seed, i);
                if (play_game({n, m}, boundary, rng, [](GameState) {}) == Side::Mafia) ++wins;
            }
        });

    SimulationReport report{n, m, trials, seed, 0, 0.0, 0.0};
    for (auto wins : partial) report.mafia_wins += wins;
    report.estimate = static_cast<double>(report.mafia_wins) / static_cast<double>(trials);
    report.std_error = std::sqrt(report.estimate * (1.0 - report.estimate) / static_cast<double>(trials));
    return report;
}

/// Empirical distribution of the mafia count after t full turns of random
/// lynching, for t inside the validity window.
inline EmpiricalDistribution estimate_distribution(int N, int M, int t, std::uint64_t trials, std::uint64_t seed,
                                                   unsigned threads = 0) {
    if (N < 1 || M < 0 || M > N) throw std::invalid_argument("estimate_distribution: need N >= 1, 0 <= M <= N");
    if (t < 0) throw std::invalid_argument("estimate_distribution: need t >= 0");
    if (2 * t > N - M) throw std::domain_error("estimate_distribution: t beyond validity window");
    if (trials < 1) throw std::invalid_argument("estimate_distribution: need trials >= 1");

    using Counts = std::vector<std::uint64_t>;
    const auto partial = detail::for_trial_blocks<Counts>(
        trials, threads, Counts(M + 1, 0), [&](std::uint64_t first, std::uint64_t last, Counts& counts) {
            for (std::uint64_t i = first; i < last; ++i) {
                auto rng = trial_stream(seed, i);
                GameState s{N, M};
                for (int turn = 0; turn < t; ++turn) s = night_kill(random_lynch(s, rng));
                ++counts[s.m];
            }
        });

    EmpiricalDistribution out{N, M, t, trials, seed, Counts(M + 1, 0), std::vector<double>(M + 1, 0.0)};
    for (const auto& counts : partial) {
        for (int m = 0; m <= M; ++m) out.counts[m] += counts[m];
    }
    for (int m = 0; m <= M; ++m) out.probs[m] = static_cast<double>(out.counts[m]) / static_cast<double>(trials);
    return out;
}

}  // namespace mafia_odds
