#include "CLI11.hpp"

#include "netcode/families.hpp"
#include "netcode/search.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace netcode;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw std::ios_base::failure("failed while reading '" + path + "'");
    return buf.str();
}

// Empty path means stdout.
void write_output(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw std::ios_base::failure("failed while writing '" + path + "'");
}

std::uint64_t default_budget()
{
    const char* env = std::getenv("NETCODE_BUDGET");
    if (!env || !*env) return kSearchBudget;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
        std::cerr << "warning: ignoring unparsable NETCODE_BUDGET='" << env << "'\n";
        return kSearchBudget;
    }
    return v;
}

bool is_fano_side(const Network& net)
{
    return net.meta.family.find("non_fano") == std::string::npos;
}

std::string structural_summary(const Network& net)
{
    const CodingStructure cs(net);
    std::ostringstream os;
    os << net.sources.size() << " sources, " << cs.coded_edges().size()
       << " coded edges, " << net.terminals.size() << " terminals";
    return os.str();
}

void print_report(const SolvabilityReport& report)
{
    std::cout << report.summary();
    if (!report.solved) {
        if (const DemandVerdict* f = report.first_failure())
            std::cout << "first failing terminal: " << f->terminal << " (demand "
                      << f->label << ")\n";
    }
}

int run_generate(const std::string& family, std::uint32_t q, const std::string& format,
                 const std::string& out)
{
    const Network net = make_family(family, q);
    const std::string text = format == "dot" ? to_dot(net) : to_json(net);
    write_output(text, out);
    // Keep stdout clean for piping when the artifact itself goes there.
    (out.empty() ? std::cerr : std::cout) << structural_summary(net) << "\n";
    return 0;
}

int run_solve(const std::string& family, std::uint32_t q, std::uint32_t p,
              std::uint32_t m, std::uint32_t k, const std::string& out)
{
    const Network net = make_family(family, q);
    const Field f = Field::make(p, m);

    CodingAssignment a = [&] {
        if (net.meta.family == "gen_fano") return fano_solution(q, f, k);
        if (net.meta.family == "gen_non_fano") return non_fano_solution(q, f, k);
        // Classic variants carry no characteristic precondition here; the
        // verification verdict below is the answer.
        return is_fano_side(net) ? fano_pattern(net, f, k) : non_fano_pattern(net, f, k);
    }();

    const SolvabilityReport report = verify_solution(a);
    print_report(report);
    if (!out.empty()) write_output(to_json(a), out);
    return report.solved ? 0 : 1;
}

int run_verify(const std::string& network_path, const std::string& assignment_path)
{
    const Network net = network_from_json(read_file(network_path));
    const CodingAssignment a = assignment_from_json(read_file(assignment_path), net);
    const SolvabilityReport report = verify_solution(a);
    print_report(report);
    return report.solved ? 0 : 1;
}

int run_search(const std::string& family, std::uint32_t q, const std::string& network_path,
               std::uint32_t p, std::uint32_t m, bool random, std::uint32_t k,
               std::uint64_t trials, std::uint64_t seed, unsigned jobs,
               std::uint64_t budget, const std::string& out)
{
    const Network net =
        network_path.empty() ? make_family(family, q) : network_from_json(read_file(network_path));
    const Field f = Field::make(p, m);
    std::cout << "network: " << net.meta.family << " q=" << net.meta.q << "\n";
    std::cout << "field: " << f.describe() << "\n";

    SearchOutcome outcome;
    if (random) {
        if (k < 2) {
            std::cerr << "error: randomized search needs --k >= 2\n";
            return 2;
        }
        std::cout << "mode: randomized (k=" << k << ", trials=" << trials
                  << ", seed=" << seed << ")\n";
        outcome = randomized_vector_search(net, f, k, trials, seed);
    } else {
        std::cout << "mode: exhaustive (scalar, jobs=" << jobs << ", budget=" << budget
                  << ")\n";
        SearchOptions opts;
        opts.budget = budget;
        opts.jobs = jobs;
        outcome = exhaustive_scalar_search(net, f, opts);
    }

    std::cout << "searched: " << outcome.searched << "\n";
    std::cout << "elapsed: " << outcome.elapsed.count() << " ms\n";
    if (outcome.assignment) {
        std::cout << outcome.report.summary();
        if (!out.empty()) write_output(to_json(*outcome.assignment), out);
    } else if (!out.empty()) {
        std::cerr << "note: nothing found, '" << out << "' not written\n";
    }
    std::cout << "STATUS: " << search_status_name(outcome.status) << "\n";
    return 0;
}

int run_table(const std::string& family, std::vector<std::uint32_t> qs,
              const std::vector<std::uint32_t>& primes, const std::vector<std::uint32_t>& fields,
              const std::string& mode_name, const std::string& format,
              std::uint64_t budget, const std::string& out)
{
    if (!primes.empty()) {
        if (!qs.empty())
            throw std::invalid_argument("pass either --q or --primes, not both");
        qs.push_back(static_cast<std::uint32_t>(q_from_primes(primes)));
    }
    if (qs.empty()) throw std::invalid_argument("one of --q or --primes is required");
    const auto mode = table_mode_from_name(mode_name);
    if (!mode) throw std::invalid_argument("unknown mode '" + mode_name + "'");

    CharacteristicTable table;
    for (std::uint32_t q : qs) {
        CharacteristicTable part = characteristic_table(family, q, fields, *mode, budget);
        for (TableRow& row : part.rows) table.rows.push_back(std::move(row));
    }
    write_output(format == "csv" ? table.to_csv() : table.to_text(), out);

    const bool all_over_budget =
        !table.rows.empty() &&
        std::all_of(table.rows.begin(), table.rows.end(),
                    [](const TableRow& r) { return r.verdict == "inconclusive"; });
    return all_over_budget ? 4 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Builds, solves, verifies, and searches linear network codes for "
                 "characteristic-dependent network families"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    const std::string family_hint =
        "family: gen-fano, gen-non-fano, fano, non-fano, modified-fano, modified-non-fano";

    // generate
    std::string gen_family, gen_format = "json", gen_out;
    std::uint32_t gen_q = 2;
    CLI::App* generate = app.add_subcommand("generate", "Construct a network and emit JSON or DOT");
    generate->add_option("family", gen_family, family_hint)->required();
    generate->add_option("--q", gen_q, "family size parameter (>= 2)");
    generate->add_option("--format", gen_format, "output format")
        ->check(CLI::IsMember({"json", "dot"}));
    generate->add_option("--out", gen_out, "write to file instead of stdout");

    // solve
    std::string solve_family, solve_out;
    std::uint32_t solve_q = 2, solve_p = 0, solve_m = 1, solve_k = 1;
    CLI::App* solve = app.add_subcommand("solve", "Construct the explicit solution and verify it");
    solve->add_option("family", solve_family, family_hint)->required();
    solve->add_option("--q", solve_q, "family size parameter (>= 2)");
    solve->add_option("--p", solve_p, "field characteristic (prime)")->required();
    solve->add_option("--m", solve_m, "field extension degree");
    solve->add_option("--k", solve_k, "vector dimension");
    solve->add_option("--out", solve_out, "write the assignment JSON to file");

    // verify
    std::string verify_network, verify_assignment;
    CLI::App* verify = app.add_subcommand("verify", "Check an assignment file against a network file");
    verify->add_option("network", verify_network, "network JSON file")->required();
    verify->add_option("assignment", verify_assignment, "assignment JSON file")->required();

    // search
    std::string search_family, search_network, search_out;
    std::uint32_t search_q = 2, search_p = 0, search_m = 1, search_k = 1;
    std::uint64_t search_trials = 1000, search_seed = kDefaultSeed;
    std::uint64_t search_budget = default_budget();
    unsigned search_jobs = 1;
    bool search_exhaustive = false, search_random = false;
    CLI::App* search = app.add_subcommand("search", "Look for a solution by enumeration or sampling");
    search->add_option("family", search_family, family_hint);
    search->add_option("--q", search_q, "family size parameter (>= 2)");
    search->add_option("--network", search_network, "search a network JSON file instead of a family");
    search->add_option("--p", search_p, "field characteristic (prime)")->required();
    search->add_option("--m", search_m, "field extension degree");
    auto* flag_ex = search->add_flag("--exhaustive", search_exhaustive,
                                     "enumerate all scalar assignments (default)");
    search->add_flag("--random", search_random, "sample random k-dimensional assignments")
        ->excludes(flag_ex);
    search->add_option("--k", search_k, "vector dimension for --random (>= 2)");
    search->add_option("--trials", search_trials, "samples for --random");
    search->add_option("--seed", search_seed, "RNG seed for --random");
    search->add_option("--jobs", search_jobs, "worker threads for --exhaustive");
    search->add_option("--budget", search_budget, "candidate cap for --exhaustive");
    search->add_option("--out", search_out, "write a found assignment JSON to file");

    // table
    std::string table_family, table_mode = "constructive", table_format = "text", table_out;
    std::vector<std::uint32_t> table_qs, table_fields, table_primes;
    CLI::App* table = app.add_subcommand("table", "Tabulate solvability verdicts across fields");
    table->add_option("family", table_family, family_hint)->required();
    table->add_option("--q", table_qs, "family size parameters")->delimiter(',');
    table->add_option("--primes", table_primes, "primes whose product gives q")->delimiter(',');
    table->add_option("--fields", table_fields, "field characteristics to test")
        ->delimiter(',')
        ->required();
    table->add_option("--mode", table_mode, "constructive, exhaustive, or auto");
    table->add_option("--format", table_format, "output format")
        ->check(CLI::IsMember({"text", "csv"}));
    table->add_option("--out", table_out, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed())
            return run_generate(gen_family, gen_q, gen_format, gen_out);
        if (solve->parsed())
            return run_solve(solve_family, solve_q, solve_p, solve_m, solve_k, solve_out);
        if (verify->parsed()) return run_verify(verify_network, verify_assignment);
        if (search->parsed()) {
            if (search_network.empty() == search_family.empty()) {
                std::cerr << "error: give a family or --network FILE (not both)\n";
                return 2;
            }
            return run_search(search_family, search_q, search_network, search_p, search_m,
                              search_random, search_k, search_trials, search_seed,
                              search_jobs, search_budget, search_out);
        }
        if (table->parsed())
            return run_table(table_family, table_qs, table_primes, table_fields,
                             table_mode, table_format, default_budget(), table_out);
    } catch (const CharacteristicMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const AssignmentMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidNetwork& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
