#ifndef NETCODE_SEARCH_HPP
#define NETCODE_SEARCH_HPP

#include "netcode/code.hpp"
#include "netcode/solutions.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace netcode {

inline constexpr std::uint64_t kSearchBudget = 1ull << 30;

enum class SearchStatus { Found, ExhaustedNone, Inconclusive };

/// Machine-readable status token: FOUND, NONE, or INCONCLUSIVE.
std::string search_status_name(SearchStatus s);

struct SearchOutcome {
    SearchStatus status = SearchStatus::Inconclusive;
    std::optional<CodingAssignment> assignment; // present exactly when Found
    SolvabilityReport report;                   // verification of the find
    std::uint64_t searched = 0;                 // candidate vectors visited
    std::chrono::milliseconds elapsed{0};
};

struct SearchOptions {
    std::uint64_t budget = kSearchBudget; // cap on full candidate combinations
    bool normalize = true; // pin each edge's first nonzero coefficient to 1
    unsigned jobs = 1;     // parallel workers over first-edge prefix classes
};

/// Enumerates every scalar (k = 1) local coefficient vector, edge by edge
/// in topological order, pruning as soon as a fully-determined terminal
/// cannot decode. Found returns the lexicographically first solution;
/// ExhaustedNone certifies that no scalar solution exists. Throws
/// BudgetExceeded when the candidate space overruns opts.budget.
SearchOutcome exhaustive_scalar_search(const Network& n, const Field& field,
                                       const SearchOptions& opts = {});

/// Samples `trials` uniformly random k-dimensional assignments (k >= 2).
/// Returns Found on the first verifying sample, else Inconclusive; never
/// ExhaustedNone. Deterministic for a fixed seed.
SearchOutcome randomized_vector_search(const Network& n, const Field& field,
                                       std::uint32_t k, std::uint64_t trials,
                                       std::uint64_t seed);

enum class TableMode { Constructive, Exhaustive, Auto };

std::string table_mode_name(TableMode m);
std::optional<TableMode> table_mode_from_name(const std::string& name);

struct TableRow {
    std::string family;
    std::uint32_t q = 0;
    std::uint32_t p = 0;
    std::uint32_t m = 1;
    std::uint32_t k = 1;
    std::string verdict;
    std::uint64_t searched = 0;
    std::int64_t elapsed_ms = 0;
};

struct CharacteristicTable {
    std::vector<TableRow> rows;

    std::string to_csv() const;  // family,q,p,m,k,verdict,searched,elapsed_ms
    std::string to_text() const; // aligned columns
};

/// One row per field prime, in the given order. Verdicts:
///   solution-verifies  the family's explicit coefficient pattern decodes
///   pattern-fails      the pattern fails verification (claim-level only)
///   found-by-search    exhaustive search found some scalar solution
///   exhaustive-none    exhaustive search certified no scalar solution
///   inconclusive       the cell exceeded the search budget
/// Constructive mode never searches; Exhaustive always searches; Auto
/// reports solution-verifies when the pattern works and otherwise searches,
/// degrading to pattern-fails when the budget is exceeded.
CharacteristicTable characteristic_table(const std::string& family, std::uint32_t q,
                                         const std::vector<std::uint32_t>& fields,
                                         TableMode mode = TableMode::Constructive,
                                         std::uint64_t budget = kSearchBudget);

} // namespace netcode

#endif
