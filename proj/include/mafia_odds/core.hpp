#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mafia_odds {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number; always stored in lowest terms with a positive
/// denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Living players `n` and living mafia members `m` at a turn boundary.
struct GameState {
    int n = 0;
    int m = 0;

    friend bool operator==(const GameState&, const GameState&) = default;
};

inline bool is_valid(GameState s) { return s.m >= 0 && s.n >= s.m; }

inline void require_valid(GameState s) {
    if (!is_valid(s)) {
        throw std::invalid_argument("invalid game state (n=" + std::to_string(s.n) +
                                    ", m=" + std::to_string(s.m) + "): need 0 <= m <= n");
    }
}

/// Which side takes a tied table (as many mafia as citizens).
enum class BoundaryRule {
    MafiaWinsOnStrictMajority,
    MafiaWinsOnTie,
};

inline constexpr BoundaryRule default_boundary = BoundaryRule::MafiaWinsOnStrictMajority;

/// True once mafia control the vote under `rule`.
inline bool mafia_has_won(GameState s, BoundaryRule rule) {
    const int citizens = s.n - s.m;
    return rule == BoundaryRule::MafiaWinsOnTie ? s.m >= citizens : s.m > citizens;
}

inline const char* to_string(BoundaryRule rule) {
    return rule == BoundaryRule::MafiaWinsOnTie ? "ties" : "strict";
}

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// k!! with 0!! = (-1)!! = 1.
inline BigInt double_factorial(int k) {
    if (k < -1) {
        throw std::invalid_argument("double_factorial: k must be >= -1, got " + std::to_string(k));
    }
    BigInt result = 1;
    for (int j = k; j > 1; j -= 2) result *= j;
    return result;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (int j = 1; j <= k; ++j) {
        result *= n - k + j;
        result /= j;
    }
    return result;
}

/// Product over j = 0..t-1 of (N - 2j - i) / (N - 2j).
///
/// This stands in for the double-factorial ratio
/// (N-2t)!! (N-i)!! / (N!! (N-2t-i)!!) and stays well defined when N-2t-i
/// goes negative: a zero factor kills the term and odd crossings carry their
/// sign through the product.
inline Rational falling_product(int N, int t, int i) {
    if (N < 0 || t < 0 || i < 0) {
        throw std::invalid_argument("falling_product: arguments must be non-negative");
    }
    if (2 * t > N) {
        throw std::domain_error("falling_product: need 2t <= N (N=" + std::to_string(N) +
                                ", t=" + std::to_string(t) + ")");
    }
    BigInt num = 1;
    BigInt den = 1;
    for (int j = 0; j < t; ++j) {
        const int top = N - 2 * j - i;
        if (top == 0) return Rational(0);
        num *= top;
        den *= N - 2 * j;
    }
    return Rational(num, den);
}

}  // namespace mafia_odds
