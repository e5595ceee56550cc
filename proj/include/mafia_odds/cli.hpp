#pragma once

// Command-line front end. Every command renders a list of flat records as
// either CSV (header row, LF endings, floats at 12 significant digits) or
// JSON (ordered keys, shortest round-trip floats, exact big integers as
// decimal strings).

#include <climits>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "core.hpp"
#include "evolution.hpp"
#include "montecarlo.hpp"
#include "winchance.hpp"

namespace mafia_odds::cli {

enum class OutputFormat { csv, json };

enum ExitCode : int {
    exit_ok = 0,
    exit_domain_error = 1,
    exit_usage_error = 2,
};

/// One output cell. Big integers travel as decimal strings.
using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, BigInt, std::string>;

struct Record {
    std::vector<std::pair<std::string, Cell>> fields;

    Record& add(std::string name, Cell value) {
        fields.emplace_back(std::move(name), std::move(value));
        return *this;
    }
};

inline std::string format_float(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string csv_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_float(v); }
        std::string operator()(const BigInt& v) const { return v.str(); }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

inline nlohmann::ordered_json json_cell(const Cell& cell) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
        nlohmann::ordered_json operator()(double v) const { return v; }
        nlohmann::ordered_json operator()(const BigInt& v) const { return v.str(); }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

inline nlohmann::ordered_json to_json(const Record& record) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [name, value] : record.fields) obj[name] = json_cell(value);
    return obj;
}

/// Writes records under a fixed header. `single` emits a bare JSON object
/// instead of an array.
inline void emit(std::ostream& out, OutputFormat format, const std::vector<std::string>& header,
                 const std::vector<Record>& records, bool single = false) {
    if (format == OutputFormat::csv) {
        for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
        out << '\n';
        for (const auto& record : records) {
            for (std::size_t i = 0; i < record.fields.size(); ++i) {
                out << (i ? "," : "") << csv_cell(record.fields[i].second);
            }
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc;
    if (single && records.size() == 1) {
        doc = to_json(records.front());
    } else {
        doc = nlohmann::ordered_json::array();
        for (const auto& record : records) doc.push_back(to_json(record));
    }
    out << doc.dump(2) << '\n';
}

inline Cell int_cell(long long v) { return static_cast<std::int64_t>(v); }

inline void add_exact(Record& record, const std::string& prefix, const Rational& value) {
    record.add(prefix + "_num", numerator(value))
        .add(prefix + "_den", denominator(value))
        .add(prefix + "_float", to_double(value));
}

// --- commands ---------------------------------------------------------------

enum class Method { recurrence, closed, asymptotic, continuous };

inline void cmd_winchance(std::ostream& out, int n, int m, Method method, BoundaryRule boundary,
                          OutputFormat format) {
    require_valid({n, m});
    Record record;
    record.add("n", int_cell(n)).add("m", int_cell(m));
    switch (method) {
        case Method::recurrence: add_exact(record, "w", win_chance_recurrence(n, m, boundary)); break;
        case Method::closed: add_exact(record, "w", win_chance_closed(n, m, boundary)); break;
        case Method::asymptotic:
            record.add("w_num", {}).add("w_den", {}).add("w_float", win_chance_asymptotic(n, m));
            break;
        case Method::continuous:
            record.add("w_num", {}).add("w_den", {}).add("w_float", win_chance_continuous(n, m));
            break;
    }
    emit(out, format, {"n", "m", "w_num", "w_den", "w_float"}, {record}, true);
}

inline void cmd_table(std::ostream& out, int max_n, BoundaryRule boundary, OutputFormat format) {
    if (max_n < 1) throw std::invalid_argument("table: need --max-n >= 1");
    WinChanceTable table(boundary, max_n);
    std::vector<Record> records;
    for (int n = 1; n <= max_n; ++n) {
        for (int m = 0; m <= n; ++m) {
            Record record;
            record.add("n", int_cell(n)).add("m", int_cell(m));
            add_exact(record, "w", table.value(n, m));
            records.push_back(std::move(record));
        }
    }
    emit(out, format, {"n", "m", "w_num", "w_den", "w_float"}, records);
}

inline void cmd_single_mafia(std::ostream& out, int max_n, OutputFormat format) {
    if (max_n < 1) throw std::invalid_argument("single-mafia: need --max-n >= 1");
    std::vector<Record> records;
    for (int n = 1; n <= max_n; ++n) {
        Record record;
        record.add("n", int_cell(n));
        add_exact(record, "w_exact", win_chance_single(n));
        record.add("approx_parity_aware", approx_single_parity(n));
        records.push_back(std::move(record));
    }
    emit(out, format, {"n", "w_exact_num", "w_exact_den", "w_exact_float", "approx_parity_aware"}, records);
}

enum class EvolveMode { discrete, continuous, both };

inline void cmd_evolve(std::ostream& out, int N, int M, EvolveMode mode, std::optional<double> t_max,
                       int samples_per_unit, OutputFormat format) {
    if (N < 1 || M < 0 || M > N) throw std::invalid_argument("evolve: need --players >= 1 and 0 <= --mafia <= --players");
    if (samples_per_unit < 1) throw std::invalid_argument("evolve: need --samples-per-unit >= 1");
    const double horizon = t_max.value_or(validity_window(N, M));
    if (!(horizon >= 0.0)) throw std::invalid_argument("evolve: need --t-max >= 0");

    auto row = [](const char* series, double t, std::optional<int> m, double value) {
        Record record;
        record.add("series", std::string(series)).add("t", t);
        record.add("m", m ? int_cell(*m) : Cell{});
        record.add("value", value);
        return record;
    };

    std::vector<Record> records;
    if (mode != EvolveMode::continuous) {
        const int last = static_cast<int>(std::floor(horizon));
        if (2 * last > N - M) {
            throw std::domain_error("evolve: --t-max " + format_float(horizon) + " exceeds the discrete validity window " +
                                    std::to_string(validity_window(N, M)));
        }
        for (int t = 0; t <= last; ++t) {
            const Distribution dist = evolve_discrete(N, M, t);
            for (int m = 0; m <= M; ++m) {
                Record record = row("p_discrete", t, m, to_double(dist.probs[m]));
                record.add("num", numerator(dist.probs[m])).add("den", denominator(dist.probs[m]));
                records.push_back(std::move(record));
            }
            const Rational mean = mean_discrete(N, M, t);
            Record record = row("mean_discrete", t, std::nullopt, to_double(mean));
            record.add("num", numerator(mean)).add("den", denominator(mean));
            records.push_back(std::move(record));
        }
    }
    if (mode != EvolveMode::discrete) {
        if (horizon > N / 2.0) {
            throw std::domain_error("evolve: --t-max beyond N/2 for the continuous model");
        }
        const auto samples = static_cast<long>(std::floor(horizon * samples_per_unit + 1e-9));
        for (long k = 0; k <= samples; ++k) {
            const double t = static_cast<double>(k) / samples_per_unit;
            const ContinuousDistribution dist = continuous_distribution(N, M, t);
            for (int m = 0; m <= M; ++m) {
                records.push_back(row("p_continuous", t, m, dist.probs[m]).add("num", {}).add("den", {}));
            }
            records.push_back(row("mean_continuous", t, std::nullopt, mean_continuous(N, M, t)).add("num", {}).add("den", {}));
        }
    }
    emit(out, format, {"series", "t", "m", "value", "num", "den"}, records);
}

inline void cmd_optimal(std::ostream& out, int max_n, OutputFormat format) {
    if (max_n < 2) throw std::invalid_argument("optimal: need --max-n >= 2");
    std::vector<Record> records;
    for (int n = 2; n <= max_n; ++n) {
        Record record;
        record.add("n", int_cell(n))
            .add("m_opt_numeric", int_cell(optimal_mafia_numeric(n)))
            .add("m_opt_approx", optimal_mafia_approx(n));
        records.push_back(std::move(record));
    }
    emit(out, format, {"n", "m_opt_numeric", "m_opt_approx"}, records);
}

inline void cmd_simulate(std::ostream& out, int n, int m, std::uint64_t trials, std::uint64_t seed,
                         BoundaryRule boundary, OutputFormat format) {
    const SimulationReport report = estimate_win_chance(n, m, boundary, trials, seed);
    Record record;
    record.add("n", int_cell(report.n))
        .add("m", int_cell(report.m))
        .add("trials", report.trials)
        .add("seed", report.seed)
        .add("mafia_wins", report.mafia_wins)
        .add("estimate", report.estimate)
        .add("std_error", report.std_error);
    emit(out, format, {"n", "m", "trials", "seed", "mafia_wins", "estimate", "std_error"}, {record}, true);
}

// --- dispatch ---------------------------------------------------------------

/// Parses `args` (args[0] is the program name), runs the chosen command and
/// returns the process exit code: 0 ok, 1 domain error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Win-chance and game-evolution analysis for the Mafia party game under random lynching",
                 "mafia-odds"};
    app.require_subcommand(1);

    const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
    const std::map<std::string, BoundaryRule> boundaries{{"strict", BoundaryRule::MafiaWinsOnStrictMajority},
                                                         {"ties", BoundaryRule::MafiaWinsOnTie}};
    const std::map<std::string, Method> methods{{"recurrence", Method::recurrence},
                                                {"closed", Method::closed},
                                                {"asymptotic", Method::asymptotic},
                                                {"continuous", Method::continuous}};
    const std::map<std::string, EvolveMode> modes{
        {"discrete", EvolveMode::discrete}, {"continuous", EvolveMode::continuous}, {"both", EvolveMode::both}};

    OutputFormat format = OutputFormat::csv;
    BoundaryRule boundary = default_boundary;
    Method method = Method::recurrence;
    EvolveMode mode = EvolveMode::both;
    std::string output;
    int players = 0;
    int mafia = 0;
    int max_n = 0;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 42;
    std::optional<double> t_max;
    int samples_per_unit = 8;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(formats));
        cmd->add_option("--output", output, "Write to this file instead of stdout");
    };
    auto add_boundary = [&](CLI::App* cmd) {
        cmd->add_option("--boundary", boundary, "Who wins a tied table")->transform(CLI::CheckedTransformer(boundaries));
    };
    auto add_state = [&](CLI::App* cmd) {
        cmd->add_option("-n,--players", players, "Number of players")->required();
        cmd->add_option("-m,--mafia", mafia, "Number of mafia members")->required();
    };

    auto* winchance = app.add_subcommand("winchance", "Mafia winning-chance for one game state");
    add_state(winchance);
    winchance->add_option("--method", method, "recurrence | closed | asymptotic | continuous")
        ->transform(CLI::CheckedTransformer(methods));
    add_boundary(winchance);
    add_format(winchance);

    auto* table = app.add_subcommand("table", "w(n,m) for every 0 <= m <= n, 1 <= n <= max-n");
    table->add_option("--max-n", max_n, "Largest player count")->required();
    add_boundary(table);
    add_format(table);

    auto* single = app.add_subcommand("single-mafia", "Exact and parity-aware approximate w(n,1)");
    single->add_option("--max-n", max_n, "Largest player count")->required();
    add_format(single);

    auto* evolve = app.add_subcommand("evolve", "Distribution of the mafia count over time");
    add_state(evolve);
    evolve->add_option("--mode", mode, "discrete | continuous | both")->transform(CLI::CheckedTransformer(modes));
    evolve->add_option("--t-max", t_max, "Last time point (default: end of the discrete validity window)");
    evolve->add_option("--samples-per-unit", samples_per_unit, "Continuous samples per unit time");
    add_format(evolve);

    auto* optimal = app.add_subcommand("optimal", "Mafia size giving the fairest game, exact vs approximate");
    optimal->add_option("--max-n", max_n, "Largest player count")->required();
    add_format(optimal);

    auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo estimate of w(n,m)");
    add_state(simulate);
    simulate->add_option("--trials", trials, "Number of simulated games")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "Base seed of the per-trial streams");
    add_boundary(simulate);
    add_format(simulate);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage_error;
    }

    std::ostringstream buffer;
    try {
        if (*winchance) {
            cmd_winchance(buffer, players, mafia, method, boundary, format);
        } else if (*table) {
            cmd_table(buffer, max_n, boundary, format);
        } else if (*single) {
            cmd_single_mafia(buffer, max_n, format);
        } else if (*evolve) {
            cmd_evolve(buffer, players, mafia, mode, t_max, samples_per_unit, format);
        } else if (*optimal) {
            cmd_optimal(buffer, max_n, format);
        } else if (*simulate) {
            cmd_simulate(buffer, players, mafia, trials, seed, boundary, format);
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage_error;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain_error;
    }

    if (output.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(output, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << output << " for writing\n";
            return exit_usage_error;
        }
        file << buffer.str();
    }
    return exit_ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace mafia_odds::cli
