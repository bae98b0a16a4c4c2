#include "netcode/search.hpp"

#include "netcode/families.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace netcode {

namespace {

// Saturating a*b so budget comparisons stay safe near 2^64.
std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
    return r;
}

std::uint64_t add_sat(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
    return r;
}

// Number of coefficient vectors of length n enumerated for one edge.
// Normalized: the zero vector plus every vector whose first nonzero entry
// is 1, i.e. 1 + (F^n - 1)/(F - 1). Unnormalized: all F^n vectors.
std::uint64_t candidate_count(std::size_t n, std::uint64_t f_size, bool normalize)
{
    if (!normalize) {
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total = mul_sat(total, f_size);
        return total;
    }
    std::uint64_t blocks = 0;
    std::uint64_t pow = 1; // F^(n-1-pos) as pos walks down from n-1
    for (std::size_t i = 0; i < n; ++i) {
        blocks = add_sat(blocks, pow);
        pow = mul_sat(pow, f_size);
    }
    return add_sat(1, blocks);
}

// Writes the idx-th candidate vector (in ascending lexicographic order of
// the underlying coefficient tuples) into out. Normalized candidates are
// the zero vector followed by the first-nonzero-pinned-to-1 vectors.
void decode_candidate(std::uint64_t idx, std::uint64_t f_size, bool normalize,
                      std::vector<FieldElem>& out)
{
    const std::size_t n = out.size();
    std::fill(out.begin(), out.end(), FieldElem{0});
    if (n == 0) return;
    if (!normalize) {
        for (std::size_t j = n; j-- > 0;) {
            out[j] = static_cast<FieldElem>(idx % f_size);
            idx /= f_size;
        }
        return;
    }
    if (idx == 0) return; // all-zero vector sorts first
    std::uint64_t r = idx - 1;
    std::uint64_t block = 1; // vectors whose first nonzero sits at pos
    for (std::size_t pos = n; pos-- > 0;) {
        if (r < block) {
            out[pos] = 1;
            for (std::size_t j = n; j-- > pos + 1;) {
                out[j] = static_cast<FieldElem>(r % f_size);
                r /= f_size;
            }
            return;
        }
        r -= block;
        block = mul_sat(block, f_size);
    }
    throw std::logic_error("candidate index out of range");
}

// A producer token resolved to either a source column or the position of
// an earlier coded edge in the enumeration order.
struct TokenRef {
    bool source = false;
    std::size_t idx = 0;
};

struct EdgeVar {
    std::string id;
    std::vector<std::string> tokens;
    std::vector<TokenRef> producers;
    std::uint64_t candidates = 0;
};

struct TerminalCheck {
    std::string node;
    std::vector<TokenRef> inputs;
    std::vector<std::size_t> demands;
};

struct Plan {
    explicit Plan(Field f) : field(std::move(f)) {}

    std::shared_ptr<const CodingStructure> cs;
    Field field;
    bool normalize = true;
    std::size_t width = 0; // number of sources == global row length at k=1
    std::vector<EdgeVar> edges;
    std::vector<TerminalCheck> terminals;
    std::vector<std::vector<std::size_t>> ready_at; // by last edge assigned
    std::vector<std::size_t> ready_upfront;         // no coded inputs at all
    std::uint64_t total_candidates = 1;
};

Plan build_plan(const Network& net, const Field& field, bool normalize)
{
    Plan plan(field);
    plan.cs = std::make_shared<const CodingStructure>(net);
    plan.normalize = normalize;
    plan.width = plan.cs->source_order().size();

    std::map<std::string, std::size_t> source_pos;
    for (std::size_t i = 0; i < plan.cs->source_order().size(); ++i)
        source_pos.emplace(plan.cs->source_order()[i], i);
    std::map<std::string, std::size_t> edge_pos;

    auto resolve = [&](const std::string& token) {
        TokenRef ref;
        auto s = source_pos.find(token);
        if (s != source_pos.end()) {
            ref.source = true;
            ref.idx = s->second;
        } else {
            ref.idx = edge_pos.at(token);
        }
        return ref;
    };

    const std::uint64_t f_size = field.size();
    for (const std::string& id : plan.cs->coded_edges()) {
        EdgeVar ev;
        ev.id = id;
        ev.tokens = plan.cs->producers(id);
        for (const std::string& t : ev.tokens) ev.producers.push_back(resolve(t));
        ev.candidates = candidate_count(ev.tokens.size(), f_size, normalize);
        plan.total_candidates = mul_sat(plan.total_candidates, ev.candidates);
        edge_pos.emplace(id, plan.edges.size());
        plan.edges.push_back(std::move(ev));
    }

    plan.ready_at.resize(plan.edges.size());
    for (const Terminal& t : net.terminals) {
        TerminalCheck tc;
        tc.node = t.node;
        std::ptrdiff_t last = -1;
        for (const std::string& token : plan.cs->terminal_inputs(t.node)) {
            TokenRef ref = resolve(token);
            if (!ref.source) last = std::max(last, static_cast<std::ptrdiff_t>(ref.idx));
            tc.inputs.push_back(ref);
        }
        for (const std::string& d : t.demands) tc.demands.push_back(source_pos.at(d));
        const std::size_t slot = plan.terminals.size();
        plan.terminals.push_back(std::move(tc));
        if (last < 0)
            plan.ready_upfront.push_back(slot);
        else
            plan.ready_at[static_cast<std::size_t>(last)].push_back(slot);
    }
    return plan;
}

// Depth-first enumeration state for one worker thread. Rows are global
// coding vectors over the source coordinates; the incremental Gaussian
// basis is recycled between terminal checks to avoid churn.
class Worker {
public:
    Worker(const Plan& plan, const std::atomic<std::size_t>* winner, std::size_t my_class)
        : plan_(plan), field_(plan.field), winner_(winner), my_class_(my_class)
    {
        rows_.resize(plan.edges.size());
        coeffs_.resize(plan.edges.size());
        for (std::size_t i = 0; i < plan.edges.size(); ++i) {
            rows_[i].assign(plan.width, 0);
            coeffs_[i].assign(plan.edges[i].tokens.size(), 0);
        }
    }

    bool run_range(std::uint64_t lo, std::uint64_t hi)
    {
        if (plan_.edges.empty()) return true;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            if (cancelled()) return false;
            if (step(0, idx) && dfs(1)) return true;
        }
        return false;
    }

    std::uint64_t searched() const { return searched_; }
    bool aborted() const { return aborted_; }
    const std::vector<std::vector<FieldElem>>& coeffs() const { return coeffs_; }

private:
    bool cancelled()
    {
        if (winner_ && winner_->load(std::memory_order_acquire) < my_class_) {
            aborted_ = true;
            return true;
        }
        return false;
    }

    bool dfs(std::size_t depth)
    {
        if (depth == plan_.edges.size()) return true;
        const std::uint64_t count = plan_.edges[depth].candidates;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            if (cancelled()) return false;
            if (step(depth, idx) && dfs(depth + 1)) return true;
        }
        return false;
    }

    // Assigns candidate idx to the edge at `depth`, recomputes its global
    // row, and checks every terminal that just became fully determined.
    bool step(std::size_t depth, std::uint64_t idx)
    {
        ++searched_;
        const EdgeVar& ev = plan_.edges[depth];
        decode_candidate(idx, field_.size(), plan_.normalize, coeffs_[depth]);

        auto& row = rows_[depth];
        std::fill(row.begin(), row.end(), FieldElem{0});
        for (std::size_t j = 0; j < ev.producers.size(); ++j) {
            const FieldElem c = coeffs_[depth][j];
            if (c == 0) continue;
            const TokenRef& pr = ev.producers[j];
            if (pr.source) {
                row[pr.idx] = field_.add(row[pr.idx], c);
            } else {
                const auto& src = rows_[pr.idx];
                for (std::size_t s = 0; s < src.size(); ++s)
                    if (src[s] != 0) row[s] = field_.add(row[s], field_.mul(c, src[s]));
            }
        }

        for (std::size_t t : plan_.ready_at[depth])
            if (!terminal_ok(plan_.terminals[t])) return false;
        return true;
    }

    bool terminal_ok(const TerminalCheck& tc)
    {
        basis_used_ = 0;
        for (const TokenRef& in : tc.inputs) {
            if (in.source) {
                scratch_.assign(plan_.width, 0);
                scratch_[in.idx] = 1;
            } else {
                scratch_ = rows_[in.idx];
            }
            adopt();
        }
        for (std::size_t d : tc.demands) {
            scratch_.assign(plan_.width, 0);
            scratch_[d] = 1;
            reduce();
            if (std::any_of(scratch_.begin(), scratch_.end(),
                            [](FieldElem v) { return v != 0; }))
                return false;
        }
        return true;
    }

    void reduce()
    {
        for (std::size_t i = 0; i < basis_used_; ++i) {
            const FieldElem c = scratch_[pivots_[i]];
            if (c == 0) continue;
            const auto& b = basis_[i];
            for (std::size_t s = 0; s < scratch_.size(); ++s)
                if (b[s] != 0) scratch_[s] = field_.sub(scratch_[s], field_.mul(c, b[s]));
        }
    }

    // Folds scratch_ into the basis (normalized so its pivot is 1);
    // linearly dependent rows are simply dropped.
    void adopt()
    {
        reduce();
        std::size_t pivot = scratch_.size();
        for (std::size_t s = 0; s < scratch_.size(); ++s)
            if (scratch_[s] != 0) {
                pivot = s;
                break;
            }
        if (pivot == scratch_.size()) return;
        const FieldElem scale = *field_.inv(scratch_[pivot]);
        for (auto& v : scratch_) v = field_.mul(v, scale);
        if (basis_used_ == basis_.size()) {
            basis_.push_back(scratch_);
            pivots_.push_back(pivot);
        } else {
            basis_[basis_used_] = scratch_;
            pivots_[basis_used_] = pivot;
        }
        ++basis_used_;
    }

    const Plan& plan_;
    Field field_;
    const std::atomic<std::size_t>* winner_;
    std::size_t my_class_;
    std::vector<std::vector<FieldElem>> rows_;
    std::vector<std::vector<FieldElem>> coeffs_;
    std::vector<std::vector<FieldElem>> basis_;
    std::vector<std::size_t> pivots_;
    std::size_t basis_used_ = 0;
    std::vector<FieldElem> scratch_;
    std::uint64_t searched_ = 0;
    bool aborted_ = false;
};

struct ClassRange {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
};

// Splits the first edge's candidate indices into contiguous ranges that
// share the first two coefficient values, so workers can own whole
// prefix classes and the smallest winning class is the lexicographic
// minimum overall.
std::vector<ClassRange> partition_classes(const Plan& plan)
{
    std::vector<ClassRange> classes;
    if (plan.edges.empty()) return classes;
    const std::uint64_t count = plan.edges[0].candidates;
    const std::size_t n = plan.edges[0].tokens.size();
    const std::uint64_t f = plan.field.size();
    auto push = [&](std::uint64_t lo, std::uint64_t hi) {
        if (lo < hi) classes.push_back({lo, hi});
    };
    if (n < 2) {
        for (std::uint64_t i = 0; i < count; ++i) push(i, i + 1);
        return classes;
    }
    const std::uint64_t chunk = candidate_count(n - 2, f, false); // F^(n-2)
    if (plan.normalize) {
        // zero vector and all first-nonzero positions >= 2 share prefix (0,0)
        const std::uint64_t head = count - mul_sat(chunk, f + 1);
        std::uint64_t at = 0;
        push(at, at + head);
        at += head;
        push(at, at + chunk); // prefix (0,1)
        at += chunk;
        for (std::uint64_t d = 0; d < f; ++d) { // prefixes (1,d)
            push(at, at + chunk);
            at += chunk;
        }
    } else {
        for (std::uint64_t at = 0; at < count; at += chunk) push(at, at + chunk);
    }
    return classes;
}

// Terminals fed only by plain source copies never change with the
// assignment: such a demand is decodable exactly when the terminal
// receives that source directly, and no enumeration can fix a failure.
bool upfront_ok(const Plan& plan)
{
    for (std::size_t t : plan.ready_upfront) {
        const TerminalCheck& tc = plan.terminals[t];
        for (std::size_t d : tc.demands) {
            bool direct = false;
            for (const TokenRef& in : tc.inputs)
                if (in.source && in.idx == d) {
                    direct = true;
                    break;
                }
            if (!direct) return false;
        }
    }
    return true;
}

CodingAssignment assignment_from_coeffs(const Plan& plan,
                                        const std::vector<std::vector<FieldElem>>& coeffs)
{
    CodingAssignment a(plan.cs, plan.field, 1);
    for (std::size_t i = 0; i < plan.edges.size(); ++i) {
        const EdgeVar& ev = plan.edges[i];
        for (std::size_t j = 0; j < ev.tokens.size(); ++j) {
            if (coeffs[i][j] == 0) continue;
            FieldMatrix m(plan.field, 1, 1);
            m.set(0, 0, coeffs[i][j]);
            a.add_local(ev.tokens[j], ev.id, std::move(m));
        }
    }
    return a;
}

std::string verdict_of(const SearchOutcome& out)
{
    return out.status == SearchStatus::Found ? "found-by-search" : "exhaustive-none";
}

} // namespace

std::string search_status_name(SearchStatus s)
{
    switch (s) {
    case SearchStatus::Found: return "FOUND";
    case SearchStatus::ExhaustedNone: return "NONE";
    case SearchStatus::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

SearchOutcome exhaustive_scalar_search(const Network& n, const Field& field,
                                       const SearchOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    Plan plan = build_plan(n, field, opts.normalize);
    if (plan.total_candidates > opts.budget) {
        std::ostringstream msg;
        msg << "search space of ";
        if (plan.total_candidates == std::numeric_limits<std::uint64_t>::max())
            msg << "more than 2^64";
        else
            msg << plan.total_candidates;
        msg << " candidate assignments exceeds budget " << opts.budget
            << "; enable normalization or pick a smaller instance";
        throw BudgetExceeded(msg.str());
    }

    SearchOutcome out;
    auto finish = [&](SearchStatus status,
                      const std::vector<std::vector<FieldElem>>* coeffs) {
        out.status = status;
        if (coeffs) {
            out.assignment = assignment_from_coeffs(plan, *coeffs);
            out.report = verify_solution(*out.assignment);
            if (!out.report.solved)
                throw std::logic_error("search result failed verification");
        }
        out.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        return out;
    };

    if (!upfront_ok(plan)) return finish(SearchStatus::ExhaustedNone, nullptr);
    if (plan.edges.empty()) {
        const std::vector<std::vector<FieldElem>> none;
        return finish(SearchStatus::Found, &none);
    }

    std::vector<ClassRange> classes = partition_classes(plan);
    const unsigned jobs = static_cast<unsigned>(
        std::min<std::size_t>(std::max(1u, opts.jobs), classes.size()));

    if (jobs == 1) {
        Worker w(plan, nullptr, 0);
        bool found = false;
        for (const ClassRange& c : classes)
            if (w.run_range(c.lo, c.hi)) {
                found = true;
                break;
            }
        out.searched = w.searched();
        if (found) return finish(SearchStatus::Found, &w.coeffs());
        return finish(SearchStatus::ExhaustedNone, nullptr);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> winner{std::numeric_limits<std::size_t>::max()};
    std::atomic<std::uint64_t> visited{0};
    std::vector<std::vector<std::vector<FieldElem>>> results(classes.size());
    std::vector<std::exception_ptr> errors(jobs);

    auto body = [&](unsigned slot) {
        try {
            while (true) {
                const std::size_t c = next.fetch_add(1);
                if (c >= classes.size()) break;
                if (winner.load(std::memory_order_acquire) < c) continue;
                Worker w(plan, &winner, c);
                const bool found = w.run_range(classes[c].lo, classes[c].hi);
                visited.fetch_add(w.searched());
                if (found) {
                    results[c] = w.coeffs();
                    std::size_t cur = winner.load();
                    while (c < cur && !winner.compare_exchange_weak(cur, c)) {
                    }
                }
            }
        } catch (...) {
            errors[slot] = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(body, j);
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);

    out.searched = visited.load();
    const std::size_t win = winner.load();
    if (win != std::numeric_limits<std::size_t>::max())
        return finish(SearchStatus::Found, &results[win]);
    return finish(SearchStatus::ExhaustedNone, nullptr);
}

SearchOutcome randomized_vector_search(const Network& n, const Field& field,
                                       std::uint32_t k, std::uint64_t trials,
                                       std::uint64_t seed)
{
    if (k < 2) throw std::invalid_argument("randomized search needs k >= 2");
    const auto start = std::chrono::steady_clock::now();
    auto cs = std::make_shared<const CodingStructure>(n);
    std::mt19937_64 rng(seed);

    SearchOutcome out;
    for (std::uint64_t t = 0; t < trials; ++t) {
        CodingAssignment a(cs, field, k);
        for (const std::string& edge : cs->coded_edges())
            for (const std::string& producer : cs->producers(edge))
                a.add_local(producer, edge, random_matrix(field, k, k, rng));
        ++out.searched;
        SolvabilityReport report = verify_solution(a);
        if (report.solved) {
            out.status = SearchStatus::Found;
            out.assignment = std::move(a);
            out.report = std::move(report);
            break;
        }
    }
    out.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return out;
}

std::string table_mode_name(TableMode m)
{
    switch (m) {
    case TableMode::Constructive: return "constructive";
    case TableMode::Exhaustive: return "exhaustive";
    case TableMode::Auto: return "auto";
    }
    return "auto";
}

std::optional<TableMode> table_mode_from_name(const std::string& name)
{
    if (name == "constructive") return TableMode::Constructive;
    if (name == "exhaustive") return TableMode::Exhaustive;
    if (name == "auto") return TableMode::Auto;
    return std::nullopt;
}

std::string CharacteristicTable::to_csv() const
{
    std::ostringstream os;
    os << "family,q,p,m,k,verdict,searched,elapsed_ms\n";
    for (const TableRow& r : rows)
        os << r.family << ',' << r.q << ',' << r.p << ',' << r.m << ',' << r.k << ','
           << r.verdict << ',' << r.searched << ',' << r.elapsed_ms << '\n';
    return os.str();
}

std::string CharacteristicTable::to_text() const
{
    const std::array<const char*, 8> head = {"family", "q",        "p",
                                             "m",      "k",        "verdict",
                                             "searched", "elapsed_ms"};
    std::vector<std::array<std::string, 8>> cells;
    for (const TableRow& r : rows)
        cells.push_back({r.family, std::to_string(r.q), std::to_string(r.p),
                         std::to_string(r.m), std::to_string(r.k), r.verdict,
                         std::to_string(r.searched), std::to_string(r.elapsed_ms)});
    std::array<std::size_t, 8> width{};
    for (std::size_t c = 0; c < head.size(); ++c) width[c] = std::string(head[c]).size();
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());

    std::ostringstream os;
    auto emit = [&](auto get) {
        for (std::size_t c = 0; c < head.size(); ++c) {
            if (c) os << "  ";
            os << std::left << std::setw(static_cast<int>(width[c])) << get(c);
        }
        os << '\n';
    };
    emit([&](std::size_t c) { return std::string(head[c]); });
    for (const auto& row : cells) emit([&](std::size_t c) { return row[c]; });
    return os.str();
}

CharacteristicTable characteristic_table(const std::string& family, std::uint32_t q,
                                         const std::vector<std::uint32_t>& fields,
                                         TableMode mode, std::uint64_t budget)
{
    CharacteristicTable table;
    const Network net = make_family(family, q);
    const bool fano_side = net.meta.family.find("non_fano") == std::string::npos;

    for (std::uint32_t p : fields) {
        const auto start = std::chrono::steady_clock::now();
        const Field f = Field::make(p, 1);

        TableRow row;
        row.family = net.meta.family;
        row.q = q;
        row.p = p;

        const CodingAssignment pattern =
            fano_side ? fano_pattern(net, f) : non_fano_pattern(net, f);
        const bool pattern_solved = verify_solution(pattern).solved;
        const std::string constructive =
            pattern_solved ? "solution-verifies" : "pattern-fails";

        switch (mode) {
        case TableMode::Constructive:
            row.verdict = constructive;
            break;
        case TableMode::Exhaustive:
            try {
                SearchOptions opts;
                opts.budget = budget;
                const SearchOutcome out = exhaustive_scalar_search(net, f, opts);
                row.verdict = verdict_of(out);
                row.searched = out.searched;
            } catch (const BudgetExceeded&) {
                row.verdict = "inconclusive";
            }
            break;
        case TableMode::Auto:
            if (pattern_solved) {
                row.verdict = constructive;
            } else {
                try {
                    SearchOptions opts;
                    opts.budget = budget;
                    const SearchOutcome out = exhaustive_scalar_search(net, f, opts);
                    row.verdict = verdict_of(out);
                    row.searched = out.searched;
                } catch (const BudgetExceeded&) {
                    row.verdict = constructive; // pattern-fails, claim level
                }
            }
            break;
        }

        row.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace netcode
