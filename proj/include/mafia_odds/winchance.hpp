#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace mafia_odds {

/// Exact mafia winning-chances w(n, m) under random lynching, filled
/// bottom-up. Cell (n, m) only reads (n-2, m) and (n-2, m-1), so rows are
/// built in order of n and columns beyond the largest requested m are never
/// materialized: answering w(n, m) costs O(n m) exact entries.
///
/// Growing the table is not thread-safe; once built, `value` on covered
/// states is read-only and may be shared.
class WinChanceTable {
public:
    /// Builds complete rows 0..max_n.
    explicit WinChanceTable(BoundaryRule boundary = default_boundary, int max_n = 0)
        : boundary_(boundary) {
        extend_to(max_n, max_n);
    }

    BoundaryRule boundary() const { return boundary_; }

    /// Largest n currently stored; -1 when empty.
    int max_n() const { return static_cast<int>(rows_.size()) - 1; }

    /// Largest m stored in every row (rows with n < max_m are complete).
    int max_m() const { return columns_; }

    /// Complete rows up to n.
    void extend_to(int n) { extend_to(n, n); }

    /// Rows up to n, each holding columns 0..min(n, m).
    void extend_to(int n, int m) {
        if (m > columns_) {
            columns_ = m;
            for (int row = 0; row <= max_n(); ++row) fill_row(row);
        }
        while (max_n() < n) {
            rows_.emplace_back();
            fill_row(max_n());
        }
    }

    /// w(n, m), growing the table if needed.
    const Rational& at(int n, int m) {
        require_valid({n, m});
        extend_to(n, m);
        return rows_[n][m];
    }

    /// w(n, m) from the stored cells only.
    const Rational& value(int n, int m) const {
        require_valid({n, m});
        if (n > max_n() || m > columns_) {
            throw std::out_of_range("WinChanceTable: (" + std::to_string(n) + "," + std::to_string(m) +
                                    ") not built");
        }
        return rows_[n][m];
    }

private:
    void fill_row(int n) {
        auto& row = rows_[n];
        const int last = std::min(n, columns_);
        row.reserve(last + 1);
        for (int m = static_cast<int>(row.size()); m <= last; ++m) row.push_back(evaluate(n, m));
    }

    // Terminal states, including the formal m > n cells the recurrence can
    // touch (w(2,1) reads w(0,1)).
    Rational lookup(int n, int m) const {
        if (m == 0) return 0;
        if (mafia_has_won({n, m}, boundary_)) return 1;
        return rows_[n][m];
    }

    Rational evaluate(int n, int m) const {
        if (m == 0) return 0;
        if (mafia_has_won({n, m}, boundary_)) return 1;
        return Rational(n - m, n) * lookup(n - 2, m) + Rational(m, n) * lookup(n - 2, m - 1);
    }

    BoundaryRule boundary_;
    int columns_ = -1;
    std::vector<std::vector<Rational>> rows_;
};

namespace detail {

inline WinChanceTable& shared_table(BoundaryRule boundary) {
    thread_local WinChanceTable strict(BoundaryRule::MafiaWinsOnStrictMajority);
    thread_local WinChanceTable ties(BoundaryRule::MafiaWinsOnTie);
    return boundary == BoundaryRule::MafiaWinsOnTie ? ties : strict;
}

inline int parity(int n) { return n % 2; }

}  // namespace detail

/// Exact w(n, m) from the turn recurrence. Results are memoized per thread.
inline Rational win_chance_recurrence(int n, int m, BoundaryRule boundary = default_boundary) {
    require_valid({n, m});
    return detail::shared_table(boundary).at(n, m);
}

/// w(n, 1) = (n-1)!! / n!!: the lone mafioso survives every lynch.
inline Rational win_chance_single(int n) {
    if (n < 1) throw std::invalid_argument("win_chance_single: need n >= 1");
    return Rational(double_factorial(n - 1), double_factorial(n));
}

/// Closed form 1 - sum_i C(m,i) (-1)^i prod_j (n-2j-i)/(n-2j), j < t_end,
/// with t_end = floor(n/2). Only derived for the strict-majority boundary.
inline Rational win_chance_closed(int n, int m, BoundaryRule boundary = default_boundary) {
    require_valid({n, m});
    if (boundary != BoundaryRule::MafiaWinsOnStrictMajority) {
        throw std::domain_error("win_chance_closed: closed form only holds for the strict-majority boundary");
    }
    const int t_end = (n - detail::parity(n)) / 2;
    Rational sum = 0;
    for (int i = 0; i <= m; ++i) {
        Rational term = Rational(binomial(m, i)) * falling_product(n, t_end, i);
        if (i % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return 1 - sum;
}

/// m (n-1)!!/n!!, accumulated as a sum of logs so large n cannot overflow.
inline double win_chance_leading_term(int n, int m) {
    if (n < 1) throw std::invalid_argument("win_chance_leading_term: need n >= 1");
    double log_ratio = 0.0;
    for (int k = n; k >= 2; k -= 2) log_ratio += std::log1p(-1.0 / k);
    return m * std::exp(log_ratio);
}

/// (pi/2)^((n mod 2) - 1/2) / sqrt(n)
inline double approx_single_parity(int n) {
    if (n < 1) throw std::invalid_argument("approx_single_parity: need n >= 1");
    return std::pow(std::numbers::pi / 2.0, detail::parity(n) - 0.5) / std::sqrt(static_cast<double>(n));
}

/// Large-n form m (pi/2)^((n mod 2) - 1/2) / sqrt(n).
inline double win_chance_asymptotic(int n, int m) {
    if (n < 1) throw std::invalid_argument("win_chance_asymptotic: need n >= 1");
    if (m < 0) throw std::invalid_argument("win_chance_asymptotic: need m >= 0");
    return m * approx_single_parity(n);
}

/// w(2k+1, 1) / w(2k, 1) = ((2k)!! / (2k-1)!!)^2 / (2k+1). Increases to pi/2.
inline Rational parity_ratio(int k) {
    if (k < 1) throw std::invalid_argument("parity_ratio: need k >= 1");
    const BigInt even = double_factorial(2 * k);
    const BigInt odd = double_factorial(2 * k - 1);
    return Rational(even * even, odd * odd * (2 * k + 1));
}

/// The m in 0..n whose w(n, m) is closest to 1/2; ties go to the smaller m.
inline int optimal_mafia_numeric(int n, BoundaryRule boundary = default_boundary) {
    if (n < 1) throw std::invalid_argument("optimal_mafia_numeric: need n >= 1");
    auto& table = detail::shared_table(boundary);
    table.extend_to(n);
    const Rational half(1, 2);
    int best = 0;
    Rational best_gap = abs(table.value(n, 0) - half);
    for (int m = 1; m <= n; ++m) {
        Rational gap = abs(table.value(n, m) - half);
        if (gap < best_gap) {
            best_gap = std::move(gap);
            best = m;
        }
    }
    return best;
}

/// (1/2) (pi/2)^(1/2 - (n mod 2)) sqrt(n)
inline double optimal_mafia_approx(int n) {
    if (n < 1) throw std::invalid_argument("optimal_mafia_approx: need n >= 1");
    return 0.5 * std::pow(std::numbers::pi / 2.0, 0.5 - detail::parity(n)) * std::sqrt(static_cast<double>(n));
}

enum class Inequality {
    MafiaOverCitizen,      // w(n,m) > w(n,m-1)
    TwoCitizensLower,      // w(n+2,m) < w(n,m)
    CitizenAndMafiaRaise,  // w(n+2,m+1) > w(n,m)
    OddPlayerRaises,       // w(n+1,m) > w(n,m), n even
    DifferencesAgree,      // w(n-2,m)-w(n,m), w(n,m)-w(n-2,m-1), w(n-2,m)-w(n-2,m-1) share a sign
};

inline const char* to_string(Inequality id) {
    switch (id) {
        case Inequality::MafiaOverCitizen: return "mafia_over_citizen";
        case Inequality::TwoCitizensLower: return "two_citizens_lower";
        case Inequality::CitizenAndMafiaRaise: return "citizen_and_mafia_raise";
        case Inequality::OddPlayerRaises: return "odd_player_raises";
        case Inequality::DifferencesAgree: return "differences_agree";
    }
    return "unknown";
}

struct MonotonicityViolation {
    Inequality inequality;
    GameState state;
};

struct MonotonicityReport {
    int max_n = 0;
    BoundaryRule boundary = default_boundary;
    std::vector<MonotonicityViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks the qualitative inequalities on every state with n <= n_max and
/// n - m >= m >= 1.
inline MonotonicityReport verify_monotonicity(int n_max, BoundaryRule boundary = default_boundary) {
    if (n_max < 3) throw std::invalid_argument("verify_monotonicity: need n_max >= 3");
    WinChanceTable table(boundary, n_max + 2);
    // Formal cells with m > n read as mafia wins, like the recurrence itself.
    auto w = [&](int n, int m) -> Rational {
        if (m == 0) return 0;
        if (m > n) return 1;
        return table.value(n, m);
    };
    auto sign = [](const Rational& x) { return x.sign(); };

    MonotonicityReport report{n_max, boundary, {}};
    auto flag = [&](Inequality id, int n, int m) { report.violations.push_back({id, {n, m}}); };

    for (int n = 2; n <= n_max; ++n) {
        for (int m = 1; 2 * m <= n; ++m) {
            const Rational here = w(n, m);
            if (!(here > w(n, m - 1))) flag(Inequality::MafiaOverCitizen, n, m);
            if (!(w(n + 2, m) < here)) flag(Inequality::TwoCitizensLower, n, m);
            if (!(w(n + 2, m + 1) > here)) flag(Inequality::CitizenAndMafiaRaise, n, m);
            if (n % 2 == 0 && !(w(n + 1, m) > here)) flag(Inequality::OddPlayerRaises, n, m);

            const int s1 = sign(w(n - 2, m) - here);
            const int s2 = sign(here - w(n - 2, m - 1));
            const int s3 = sign(w(n - 2, m) - w(n - 2, m - 1));
            if (s1 != s2 || s2 != s3) flag(Inequality::DifferencesAgree, n, m);
        }
    }
    return report;
}

}  // namespace mafia_odds
