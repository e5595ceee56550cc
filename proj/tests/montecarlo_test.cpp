#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "mafia_odds/evolution.hpp"
#include "mafia_odds/montecarlo.hpp"
#include "mafia_odds/winchance.hpp"

using namespace mafia_odds;

namespace {

constexpr auto strict = BoundaryRule::MafiaWinsOnStrictMajority;
constexpr auto ties = BoundaryRule::MafiaWinsOnTie;

// |observed - p| within four binomial standard errors of n draws.
void expect_within_4_sigma(double observed, double p, double n, const std::string& what) {
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    EXPECT_LE(std::abs(observed - p), 4.0 * sigma) << what << ": observed " << observed << " vs " << p;
}

void check_trajectory(const Trajectory& traj, BoundaryRule rule) {
    ASSERT_FALSE(traj.states.empty());
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const GameState a = traj.states[i - 1];
        const GameState b = traj.states[i];
        const bool last = i + 1 == traj.states.size();
        const int dm = a.m - b.m;
        ASSERT_TRUE(dm == 0 || dm == 1);
        if (last) {
            ASSERT_TRUE(a.n - b.n == 2 || a.n - b.n == 1);
        } else {
            ASSERT_EQ(a.n - b.n, 2);
        }
    }
    for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
        ASSERT_FALSE(game_outcome(traj.states[i], rule).has_value());
    }
    const auto outcome = game_outcome(traj.states.back(), rule);
    ASSERT_TRUE(outcome.has_value());
    ASSERT_EQ(*outcome, traj.winner);
}

}  // namespace

TEST(SplitMix64, DeterministicAndDistinctPerTrial) {
    auto a = trial_stream(42, 0);
    auto b = trial_stream(42, 0);
    auto c = trial_stream(42, 1);
    auto d = trial_stream(43, 0);
    const auto a0 = a();
    EXPECT_EQ(a0, b());
    EXPECT_NE(a0, c());
    EXPECT_NE(a0, d());
}

TEST(SimulateGame, MafiaMajorityEndsImmediately) {
    auto rng = trial_stream(1, 0);
    const auto traj = simulate_game(3, 3, strict, rng);
    EXPECT_EQ(traj.winner, Side::Mafia);
    EXPECT_EQ(traj.states, (std::vector<GameState>{{3, 3}}));
}

TEST(SimulateGame, NoMafiaEndsImmediately) {
    auto rng = trial_stream(1, 0);
    const auto traj = simulate_game(1, 0, strict, rng);
    EXPECT_EQ(traj.winner, Side::Citizens);
    EXPECT_EQ(traj.states.size(), 1u);
}

TEST(SimulateGame, RejectsInvalidState) {
    auto rng = trial_stream(1, 0);
    EXPECT_THROW(simulate_game(3, 4, strict, rng), std::invalid_argument);
}

TEST(SimulateGame, FirstTransitionFrequencies) {
    constexpr int trials = 100000;
    int survived = 0;
    for (int i = 0; i < trials; ++i) {
        auto rng = trial_stream(2024, i);
        const auto traj = simulate_game(4, 1, strict, rng);
        ASSERT_GE(traj.states.size(), 2u);
        const GameState next = traj.states[1];
        if (next == GameState{2, 1}) {
            ++survived;
        } else {
            ASSERT_EQ(next.m, 0);
        }
    }
    expect_within_4_sigma(static_cast<double>(survived) / trials, 0.75, trials, "(4,1)->(2,1)");
}

TEST(SimulateGame, TrajectoryInvariants) {
    for (auto rule : {strict, ties}) {
        for (int n = 0; n <= 15; ++n) {
            for (int m = 0; m <= n; ++m) {
                for (int i = 0; i < 50; ++i) {
                    auto rng = trial_stream(n * 1000 + m, i);
                    check_trajectory(simulate_game(n, m, rule, rng), rule);
                }
            }
        }
    }
}

TEST(Kernel, LynchHitsMafiaWithProbabilityMOverN) {
    constexpr int samples = 100000;
    for (GameState s : {GameState{4, 1}, GameState{9, 3}, GameState{10, 5}}) {
        int hits = 0;
        for (int i = 0; i < samples; ++i) {
            auto rng = trial_stream(99, i);
            if (random_lynch(s, rng).m == s.m - 1) ++hits;
        }
        expect_within_4_sigma(static_cast<double>(hits) / samples, static_cast<double>(s.m) / s.n, samples,
                              "state (" + std::to_string(s.n) + "," + std::to_string(s.m) + ")");
    }
}

TEST(EstimateWinChance, NineAndOne) {
    const auto r = estimate_win_chance(9, 1, strict, 1000000, 42);
    EXPECT_EQ(r.trials, 1000000u);
    EXPECT_EQ(r.seed, 42u);
    EXPECT_DOUBLE_EQ(r.estimate, static_cast<double>(r.mafia_wins) / 1e6);
    EXPECT_DOUBLE_EQ(r.std_error, std::sqrt(r.estimate * (1 - r.estimate) / 1e6));
    EXPECT_LE(std::abs(r.estimate - 128.0 / 315.0), 4 * r.std_error);
}

TEST(EstimateWinChance, CoinFlipGame) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto r = estimate_win_chance(2, 1, strict, 100000, seed);
        EXPECT_LE(std::abs(r.estimate - 0.5), 4 * r.std_error) << "seed " << seed;
    }
}

TEST(EstimateWinChance, CertainOutcomes) {
    const auto mafia = estimate_win_chance(5, 5, strict, 10, 7);
    EXPECT_EQ(mafia.estimate, 1.0);
    EXPECT_EQ(mafia.std_error, 0.0);
    EXPECT_EQ(estimate_win_chance(8, 0, strict, 10, 7).estimate, 0.0);
    EXPECT_THROW(estimate_win_chance(5, 6, strict, 10, 7), std::invalid_argument);
    EXPECT_THROW(estimate_win_chance(5, 2, strict, 0, 7), std::invalid_argument);
}

TEST(EstimateWinChance, IndependentOfThreadCount) {
    const auto one = estimate_win_chance(12, 3, strict, 50001, 5, 1);
    for (unsigned threads : {2u, 3u, 8u, 64u}) {
        const auto many = estimate_win_chance(12, 3, strict, 50001, 5, threads);
        EXPECT_EQ(many.mafia_wins, one.mafia_wins) << threads << " threads";
        EXPECT_EQ(many.estimate, one.estimate);
    }
    EXPECT_EQ(estimate_win_chance(12, 3, strict, 3, 5, 16).mafia_wins,
              estimate_win_chance(12, 3, strict, 3, 5, 1).mafia_wins);
}

TEST(EstimateWinChance, AgreesWithRecurrenceUnderTieBoundary) {
    for (int n = 1; n <= 8; ++n) {
        for (int m = 0; m <= n; ++m) {
            const auto r = estimate_win_chance(n, m, ties, 20000, 11 * n + m);
            const double exact = to_double(win_chance_recurrence(n, m, ties));
            EXPECT_LE(std::abs(r.estimate - exact), 4 * r.std_error + 1e-15) << n << "," << m;
        }
    }
}

TEST(DefaultThreadCount, ReadsEnvironment) {
    ::setenv("MAFIA_ODDS_THREADS", "3", 1);
    EXPECT_EQ(default_thread_count(), 3u);
    ::setenv("MAFIA_ODDS_THREADS", "0", 1);
    EXPECT_GE(default_thread_count(), 1u);
    ::unsetenv("MAFIA_ODDS_THREADS");
    EXPECT_GE(default_thread_count(), 1u);
}

TEST(EstimateDistribution, OneTurn) {
    const auto d = estimate_distribution(4, 1, 1, 100000, 3);
    expect_within_4_sigma(d.probs[1], 0.75, 100000, "p_1(1)");
    EXPECT_EQ(d.counts[0] + d.counts[1], 100000u);
}

TEST(EstimateDistribution, ZeroTurnsIsPointMass) {
    const auto d = estimate_distribution(10, 3, 0, 100, 3);
    EXPECT_EQ(d.probs, (std::vector<double>{0, 0, 0, 1}));
}

TEST(EstimateDistribution, CloseToExactInTotalVariation) {
    const auto empirical = estimate_distribution(32, 4, 8, 100000, 17);
    const auto exact = evolve_discrete(32, 4, 8);
    double tv = 0.0;
    for (int m = 0; m <= 4; ++m) tv += std::abs(empirical.probs[m] - to_double(exact.probs[m]));
    EXPECT_LT(tv / 2.0, 0.01);
}

TEST(EstimateDistribution, ThreadInvariantAndWindowChecked) {
    const auto a = estimate_distribution(20, 3, 5, 30000, 8, 1);
    const auto b = estimate_distribution(20, 3, 5, 30000, 8, 5);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_THROW(estimate_distribution(20, 3, 9, 10, 8), std::domain_error);
    EXPECT_THROW(estimate_distribution(20, 21, 0, 10, 8), std::invalid_argument);
}
