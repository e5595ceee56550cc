#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace mafia_odds {

/// Exact distribution of the living-mafia count after `t` full turns, for a
/// game that started with N players and M mafia.
struct Distribution {
    int N = 0;
    int M = 0;
    int t = 0;
    std::vector<Rational> probs;  // probs[m], m = 0..M

    Rational mean() const {
        Rational sum = 0;
        for (std::size_t m = 1; m < probs.size(); ++m) sum += probs[m] * static_cast<int>(m);
        return sum;
    }
};

/// Continuous-time approximation of `Distribution` at real time t.
struct ContinuousDistribution {
    int N = 0;
    int M = 0;
    double t = 0.0;
    std::vector<double> probs;

    double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
};

namespace detail {

inline void require_initial(int N, int M) {
    if (N < 1 || M < 0 || M > N) {
        throw std::invalid_argument("need N >= 1 and 0 <= M <= N (N=" + std::to_string(N) +
                                    ", M=" + std::to_string(M) + ")");
    }
}

inline void require_mafia_index(int M, int m) {
    if (m < 0 || m > M) {
        throw std::invalid_argument("mafia count m=" + std::to_string(m) + " outside 0.." + std::to_string(M));
    }
}

inline void require_real_time(int N, double t) {
    if (!(t >= 0.0 && t <= N / 2.0)) {
        throw std::domain_error("time t=" + std::to_string(t) + " outside [0, N/2]");
    }
}

/// sqrt(1 - 2t/N): the surviving fraction of each mafioso in continuous time.
inline double survival(int N, double t) { return std::sqrt(std::max(0.0, 1.0 - 2.0 * t / N)); }

/// Classic fourth-order Runge-Kutta step for y' = f(t, y).
template <typename Rhs>
void rk4_step(Rhs&& f, double t, std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    f(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

}  // namespace detail

/// Largest turn index for which the discrete equations describe real games.
inline int validity_window(int N, int M) { return (N - M) / 2; }

/// Applies t exact turns of
///   p_m(s+1) = (n-m)/n p_m(s) + (m+1)/n p_{m+1}(s),  n = N - 2s
/// starting from a point mass at M.
inline Distribution evolve_discrete(int N, int M, int t) {
    detail::require_initial(N, M);
    if (t < 0) throw std::invalid_argument("evolve_discrete: need t >= 0");
    if (2 * t > N - M) {
        throw std::domain_error("evolve_discrete: t=" + std::to_string(t) + " beyond validity window " +
                                std::to_string(validity_window(N, M)));
    }
    std::vector<Rational> p(M + 1, Rational(0));
    p[M] = 1;
    for (int s = 0; s < t; ++s) {
        const int n = N - 2 * s;
        std::vector<Rational> next(M + 1);
        for (int m = 0; m <= M; ++m) {
            next[m] = Rational(n - m, n) * p[m];
            if (m < M) next[m] += Rational(m + 1, n) * p[m + 1];
        }
        p = std::move(next);
    }
    return {N, M, t, std::move(p)};
}

/// Closed form sum_{i=m}^{M} C(M,i) C(i,m) (-1)^(i-m) falling_product(N, t, i).
/// Defined for every 2t <= N; it matches the game only inside the validity
/// window, plus the endgame time used by win_chance_from_evolution.
inline Rational pm_closed(int N, int M, int m, int t) {
    detail::require_initial(N, M);
    detail::require_mafia_index(M, m);
    if (t < 0) throw std::invalid_argument("pm_closed: need t >= 0");
    Rational sum = 0;
    for (int i = m; i <= M; ++i) {
        Rational term = Rational(binomial(M, i) * binomial(i, m)) * falling_product(N, t, i);
        if ((i - m) % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return sum;
}

/// <m>(t) = M prod_{i<t} (N-2i-1)/(N-2i)
inline Rational mean_discrete(int N, int M, int t) {
    detail::require_initial(N, M);
    if (t < 0) throw std::invalid_argument("mean_discrete: need t >= 0");
    if (N - 2 * t - M < 0) {
        throw std::domain_error("mean_discrete: need N - 2t - M >= 0");
    }
    return falling_product(N, t, 1) * M;
}

/// C(M,m) (1-s)^(M-m) s^m with s = sqrt(1 - 2t/N).
inline double pm_continuous(int N, int M, int m, double t) {
    detail::require_initial(N, M);
    detail::require_mafia_index(M, m);
    detail::require_real_time(N, t);
    const double s = detail::survival(N, t);
    return binomial(M, m).convert_to<double>() * std::pow(1.0 - s, M - m) * std::pow(s, m);
}

inline ContinuousDistribution continuous_distribution(int N, int M, double t) {
    detail::require_initial(N, M);
    detail::require_real_time(N, t);
    ContinuousDistribution out{N, M, t, std::vector<double>(M + 1)};
    for (int m = 0; m <= M; ++m) out.probs[m] = pm_continuous(N, M, m, t);
    return out;
}

/// Time at which pm_continuous(N, M, m, .) peaks: (N/2)(1 - (m/M)^2).
inline double peak_time(int N, int M, int m) {
    detail::require_initial(N, M);
    if (m < 1 || m > M) {
        throw std::invalid_argument("peak_time: need 1 <= m <= M (m=0 peaks at the boundary t=N/2)");
    }
    const double ratio = static_cast<double>(m) / M;
    return N / 2.0 * (1.0 - ratio * ratio);
}

/// M sqrt(1 - 2t/N)
inline double mean_continuous(int N, int M, double t) {
    detail::require_initial(N, M);
    detail::require_real_time(N, t);
    return M * detail::survival(N, t);
}

/// Integrates dp_m/dt = (-m p_m + (m+1) p_{m+1}) / (N - 2t) from a point mass
/// at M with fixed-step RK4. The step actually used is t_end / ceil(t_end/step).
inline ContinuousDistribution integrate_continuous(int N, int M, double t_end, double step) {
    detail::require_initial(N, M);
    if (!(step > 0.0)) throw std::invalid_argument("integrate_continuous: step must be positive");
    if (!(t_end >= 0.0)) throw std::invalid_argument("integrate_continuous: t_end must be non-negative");
    if (t_end > N / 2.0 - 10.0 * step) {
        throw std::domain_error("integrate_continuous: t_end must stay 10 steps clear of the singularity at N/2");
    }

    std::vector<double> p(M + 1, 0.0);
    p[M] = 1.0;
    auto rhs = [N, M](double t, const std::vector<double>& y, std::vector<double>& dy) {
        const double rate = 1.0 / (N - 2.0 * t);
        for (int m = 0; m <= M; ++m) {
            double d = -m * y[m];
            if (m < M) d += (m + 1) * y[m + 1];
            dy[m] = d * rate;
        }
    };

    const auto steps = static_cast<long>(std::ceil(t_end / step));
    if (steps > 0) {
        const double h = t_end / static_cast<double>(steps);
        for (long k = 0; k < steps; ++k) detail::rk4_step(rhs, k * h, p, h);
    }
    return {N, M, t_end, std::move(p)};
}

/// 1 - p~_0((n-1)/2) = 1 - (1 - 1/sqrt(n))^m
inline double win_chance_continuous(int n, int m) {
    if (n < 1) throw std::invalid_argument("win_chance_continuous: need n >= 1");
    if (m < 0) throw std::invalid_argument("win_chance_continuous: need m >= 0");
    return 1.0 - std::pow(1.0 - 1.0 / std::sqrt(static_cast<double>(n)), m);
}

/// The further simplification m / sqrt(n).
inline double win_chance_continuous_leading(int n, int m) {
    if (n < 1) throw std::invalid_argument("win_chance_continuous_leading: need n >= 1");
    return m / std::sqrt(static_cast<double>(n));
}

/// w(n, m) = 1 - p_0(floor(n/2)): citizens win exactly when no mafioso
/// survives the last turn.
inline Rational win_chance_from_evolution(int n, int m) {
    if (n < 1) throw std::invalid_argument("win_chance_from_evolution: need n >= 1");
    require_valid({n, m});
    return 1 - pm_closed(n, m, 0, (n - n % 2) / 2);
}

}  // namespace mafia_odds
