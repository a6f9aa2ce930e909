// zxdb: command-line front end for the ZX rewrite engine.
//
// Exit codes: 0 success / equal, 1 not equal, 2 bad input or usage,
// 3 rewrite budget exhausted (the diagram is still written).

#include "zxdb/zxdb.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace {

    using namespace zxdb;

    constexpr int exit_ok        = 0;
    constexpr int exit_not_equal = 1;
    constexpr int exit_input     = 2;
    constexpr int exit_budget    = 3;

    std::vector<RuleId> parse_schedule(const std::string& text) {
        if (text.empty() || text == "default") return default_schedule();
        std::vector<RuleId> out;
        std::stringstream   ss(text);
        std::string         item;
        while (std::getline(ss, item, ',')) {
            auto r = rule_from_name(item);
            if (!r) throw std::invalid_argument("unknown rule '" + item + "'");
            out.push_back(*r);
        }
        if (out.empty()) throw std::invalid_argument("empty schedule");
        return out;
    }

    std::string verdict_json(const EquivalenceVerdict& v) {
        ordered_json j;
        j["equal"]       = v.equal;
        j["method"]      = to_string(v.method);
        j["scalar"]      = {v.scalar.real(), v.scalar.imag()};
        j["permutation"] = v.permutation;
        j["residual"]    = v.residual;
        return j.dump() + "\n";
    }

    ordered_json stats_json(const Diagram& d) {
        std::map<std::string, std::size_t> kinds{{"Z", 0}, {"X", 0}, {"B", 0}};
        std::map<std::string, std::size_t> phases;
        d.for_each_node([&](NodeId v) {
            ++kinds[to_string(d.kind(v))];
            if (d.kind(v) != NodeKind::B) ++phases[d.phase(v).is_exact() ? d.phase(v).to_string() : "inexact"];
        });
        std::size_t simple = 0, hadamard = 0;
        for (const auto& [uv, k]: d.edges()) ++(k == EdgeKind::Simple ? simple : hadamard);
        ordered_json j;
        j["nodes"]           = {{"Z", kinds["Z"]}, {"X", kinds["X"]}, {"B", kinds["B"]}, {"total", d.node_count()}};
        j["edges"]           = {{"S", simple}, {"H", hadamard}, {"total", d.edge_count()}};
        j["phases"]          = phases;
        j["degree_sequence"] = d.degree_sequence();
        j["boundaries"]      = {{"inputs", d.inputs().size()}, {"outputs", d.outputs().size()}};
        return j;
    }

    int cmd_simplify(const std::string& input, const std::string& schedule_arg, std::size_t max_rounds,
                     const std::string& out) {
        const auto schedule = parse_schedule(schedule_arg);
        Diagram    d        = load_diagram(input);
        const auto reports  = run_pipeline(d, schedule, max_rounds);
        // keep stdout clean for the diagram when it goes there
        std::ostream& log = out == "-" ? std::cerr : std::cout;
        log << pass_report_csv_header() << "\n";
        for (const auto& r: reports) log << to_csv_row(r) << "\n";
        write_text(out, dump_diagram(d));
        if (budget_exhausted(reports)) {
            std::cerr << "zxdb: rewrite budget exhausted\n";
            return exit_budget;
        }
        return exit_ok;
    }

    int cmd_verify(const std::string& before, const std::string& after, double tol, const std::string& reference) {
        const Diagram          a = load_diagram(before);
        const Diagram          b = load_diagram(after);
        std::optional<Diagram> ref;
        VerifyBudget           budget;
        budget.tol = tol;
        if (!reference.empty()) {
            ref              = load_diagram(reference);
            budget.reference = &*ref;
        }
        const auto v = verify(a, b, budget);
        std::cout << verdict_json(v);
        return v.equal ? exit_ok : exit_not_equal;
    }

    int cmd_bench(const std::string& rule_name_arg, const std::vector<std::size_t>& sizes, std::size_t reps,
                  std::uint64_t seed, const std::string& out) {
        const auto rule = rule_from_name(rule_name_arg);
        if (!rule) {
            std::cerr << "zxdb: unknown rule '" << rule_name_arg << "'\n";
            return exit_input;
        }
        if (sizes.empty() || reps < 1) {
            std::cerr << "zxdb: need at least one size and one repetition\n";
            return exit_input;
        }
        for (std::size_t i = 1; i < sizes.size(); ++i) {
            if (sizes[i] <= sizes[i - 1]) {
                std::cerr << "zxdb: --sizes must be strictly increasing\n";
                return exit_input;
            }
        }
        std::ostringstream csv;
        csv << "rule,size,nodes,applied,mean_s,stddev_s\n";
        csv.precision(9);
        for (auto size: sizes) {
            std::vector<double> times;
            std::size_t         nodes = 0, applied = 0;
            for (std::size_t r = 0; r < reps; ++r) {
                Diagram d = gen_rule_instance(*rule, size, seed);
                nodes     = d.node_count();
                const auto start   = std::chrono::steady_clock::now();
                const auto reports = run_to_fixpoint(d, *rule);
                times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
                applied = 0;
                for (const auto& p: reports) applied += p.applied;
            }
            const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
            double       var  = 0.0;
            for (double t: times) var += (t - mean) * (t - mean);
            const double stddev = std::sqrt(var / static_cast<double>(times.size()));
            csv << rule_name(*rule) << ',' << size << ',' << nodes << ',' << applied << ',' << mean << ',' << stddev
                << "\n";
        }
        write_text(out, csv.str());
        return exit_ok;
    }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ZX-diagram rewrite engine"};
    app.require_subcommand(1);

    std::string input, second, out = "-", schedule, reference, rule, kind;
    std::size_t max_rounds = default_max_passes, reps = 1, qubits = 3, gates = 10, size = 1;
    double      tol  = default_tolerance;
    std::uint64_t seed = 0;
    std::vector<std::size_t> sizes;

    auto* simplify = app.add_subcommand("simplify", "Run a rewrite schedule to its fixpoint");
    simplify->add_option("input", input, "Diagram JSON or .qasm file")->required();
    simplify->add_option("--schedule", schedule, "Comma-separated rule names (default: full pipeline)");
    simplify->add_option("--max-rounds", max_rounds, "Round budget")->check(CLI::PositiveNumber);
    simplify->add_option("--out", out, "Output JSON path, - for stdout");

    auto* verify_cmd = app.add_subcommand("verify", "Check two diagrams implement the same linear map");
    verify_cmd->add_option("before", input)->required();
    verify_cmd->add_option("after", second)->required();
    verify_cmd->add_option("--tol", tol, "Relative max-entry tolerance");
    verify_cmd->add_option("--reference", reference, "Expected diagram for the isomorphism fallback");

    auto* bench = app.add_subcommand("bench", "Time one rule to fixpoint over generated instances");
    bench->add_option("--rule", rule)->required();
    bench->add_option("--sizes", sizes, "Instance sizes, strictly increasing")->delimiter(',')->required();
    bench->add_option("--reps", reps);
    bench->add_option("--seed", seed);
    bench->add_option("--out", out, "CSV path, - for stdout");

    auto* gen = app.add_subcommand("gen", "Generate a random circuit or rule instance");
    gen->add_option("kind", kind, "circuit | instance")->required()->check(CLI::IsMember({"circuit", "instance"}));
    gen->add_option("--qubits", qubits);
    gen->add_option("--gates", gates);
    gen->add_option("--rule", rule);
    gen->add_option("--size", size);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out);

    auto* stats = app.add_subcommand("stats", "Summarise a diagram");
    stats->add_option("input", input)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    try {
        if (*simplify) return cmd_simplify(input, schedule, max_rounds, out);
        if (*verify_cmd) return cmd_verify(input, second, tol, reference);
        if (*bench) return cmd_bench(rule, sizes, reps, seed, out);
        if (*gen) {
            if (kind == "circuit") {
                write_text(out, to_qasm(gen_random_circuit(qubits, gates, seed)));
                return exit_ok;
            }
            const auto r = rule_from_name(rule);
            if (!r) {
                std::cerr << "zxdb: gen instance needs --rule with a known rule name\n";
                return exit_input;
            }
            write_text(out, dump_diagram(gen_rule_instance(*r, size, seed)));
            return exit_ok;
        }
        if (*stats) {
            std::cout << stats_json(load_diagram(input)).dump(2) << "\n";
            return exit_ok;
        }
    } catch (const ParseError& e) {
        std::cerr << "zxdb: " << e.what() << "\n";
        return exit_input;
    } catch (const FormatError& e) {
        std::cerr << "zxdb: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "zxdb: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}
