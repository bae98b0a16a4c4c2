#include "netcode/code.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace netcode {

CodingAssignment::CodingAssignment(const Network& net, Field field, std::uint32_t k)
    : CodingAssignment(std::make_shared<const CodingStructure>(net), std::move(field), k)
{
}

CodingAssignment::CodingAssignment(std::shared_ptr<const CodingStructure> cs,
                                   Field field, std::uint32_t k)
    : cs_(std::move(cs)), field_(std::move(field)), k_(k)
{
    if (k_ == 0) throw std::invalid_argument("vector dimension k must be >= 1");
}

void CodingAssignment::add_local(const std::string& producer,
                                 const std::string& consumer, FieldMatrix matrix)
{
    if (!cs_->is_coded(consumer))
        throw AssignmentMismatch("consumer '" + consumer + "' is not a coded edge");
    const auto& prods = cs_->producers(consumer);
    if (std::find(prods.begin(), prods.end(), producer) == prods.end())
        throw AssignmentMismatch("'" + producer + "' does not feed coded edge '" +
                                 consumer + "'");
    if (matrix.field() != field_)
        throw AssignmentMismatch("matrix for (" + producer + ", " + consumer +
                                 ") is over the wrong field");
    if (matrix.rows() != k_ || matrix.cols() != k_)
        throw AssignmentMismatch("matrix for (" + producer + ", " + consumer +
                                 ") must be " + std::to_string(k_) + "x" +
                                 std::to_string(k_));
    auto key = std::make_pair(producer, consumer);
    if (index_.count(key))
        throw AssignmentMismatch("duplicate local matrix for (" + producer + ", " +
                                 consumer + ")");
    index_[key] = locals_.size();
    locals_.push_back({producer, consumer, std::move(matrix)});
}

const FieldMatrix* CodingAssignment::local(const std::string& producer,
                                           const std::string& consumer) const
{
    auto it = index_.find({producer, consumer});
    return it == index_.end() ? nullptr : &locals_[it->second].matrix;
}

GlobalCode::GlobalCode(std::shared_ptr<const CodingStructure> cs, Field field,
                       std::uint32_t k)
    : cs_(std::move(cs)), field_(std::move(field)), k_(k)
{
}

const FieldMatrix& GlobalCode::of_coded(const std::string& coded_edge) const
{
    auto it = coded_.find(coded_edge);
    if (it == coded_.end())
        throw std::invalid_argument("no global matrix for edge '" + coded_edge + "'");
    return it->second;
}

void GlobalCode::set_coded(const std::string& coded_edge, FieldMatrix m)
{
    coded_.insert_or_assign(coded_edge, std::move(m));
}

FieldMatrix GlobalCode::selector(const std::string& label) const
{
    std::size_t block = cs_->source_index(label);
    FieldMatrix sel(field_, k_, source_count() * k_);
    sel.paste(0, block * k_, FieldMatrix::identity(field_, k_));
    return sel;
}

FieldMatrix GlobalCode::of_token(const std::string& token) const
{
    if (coded_.count(token)) return coded_.at(token);
    return selector(token);
}

FieldMatrix GlobalCode::stacked_inputs(const std::string& terminal) const
{
    const auto& inputs = cs_->terminal_inputs(terminal);
    FieldMatrix stack(field_, 0, source_count() * k_);
    for (const auto& token : inputs) stack = vstack(stack, of_token(token));
    return stack;
}

GlobalCode global_codes(const CodingAssignment& a)
{
    GlobalCode g(a.structure_ptr(), a.field(), a.k());
    const CodingStructure& cs = a.structure();
    const std::size_t cols = cs.source_order().size() * a.k();

    for (const auto& e : cs.coded_edges()) {
        FieldMatrix m(a.field(), a.k(), cols);
        for (const auto& p : cs.producers(e)) {
            const FieldMatrix* L = a.local(p, e);
            if (!L) continue; // implicit zero
            m = m + *L * g.of_token(p);
        }
        g.set_coded(e, std::move(m));
    }
    return g;
}

DecodeOutcome decodable(const GlobalCode& g, const std::string& terminal,
                        const std::string& label)
{
    FieldMatrix gt = g.stacked_inputs(terminal);
    FieldMatrix sel = g.selector(label);
    DecodeOutcome out;
    if (auto x = solve_left(gt, sel)) {
        out.decoder = std::move(*x);
        return out;
    }
    out.rank_deficit = mat_rank(vstack(gt, sel)) - mat_rank(gt);
    return out;
}

const DemandVerdict* SolvabilityReport::first_failure() const
{
    for (const auto& d : demands)
        if (!d.ok) return &d;
    return nullptr;
}

std::string SolvabilityReport::summary() const
{
    std::ostringstream os;
    for (const auto& d : demands) {
        os << d.terminal << " demands " << d.label << ": ";
        if (d.ok)
            os << "ok\n";
        else
            os << "FAIL (rank deficit " << d.rank_deficit << ")\n";
    }
    os << (solved ? "solved" : "unsolved") << "\n";
    return os.str();
}

SolvabilityReport verify_solution(const CodingAssignment& a)
{
    GlobalCode g = global_codes(a);
    SolvabilityReport report;
    report.solved = true;
    for (const auto& t : a.network().terminals) {
        for (const auto& d : t.demands) {
            DecodeOutcome o = decodable(g, t.node, d);
            DemandVerdict v;
            v.terminal = t.node;
            v.label = d;
            v.ok = o.decoder.has_value();
            v.rank_deficit = o.rank_deficit;
            v.decoder = std::move(o.decoder);
            if (!v.ok) report.solved = false;
            report.demands.push_back(std::move(v));
        }
    }
    return report;
}

namespace {

// k-symbol blocks carried by every producer token for one source tuple
using SymbolMap = std::map<std::string, std::vector<FieldElem>>;

std::vector<FieldElem> apply_local(const Field& f, const FieldMatrix* L,
                                   const std::vector<FieldElem>& x)
{
    std::vector<FieldElem> y(x.size(), 0);
    if (!L) return y;
    for (std::size_t r = 0; r < L->rows(); ++r) {
        FieldElem acc = 0;
        for (std::size_t c = 0; c < L->cols(); ++c)
            acc = f.add(acc, f.mul(L->at(r, c), x[c]));
        y[r] = acc;
    }
    return y;
}

} // namespace

bool function_check(const CodingAssignment& a, std::uint64_t budget)
{
    const CodingStructure& cs = a.structure();
    const Field& f = a.field();
    const std::size_t S = cs.source_order().size();
    const std::size_t symbols = S * a.k();

    long double space = 1;
    for (std::size_t i = 0; i < symbols; ++i) space *= f.size();
    if (space > static_cast<long double>(budget))
        throw BudgetExceeded("function check would enumerate " +
                             std::to_string(static_cast<double>(space)) +
                             " source tuples (budget " + std::to_string(budget) + ")");

    // (terminal, demand) -> received tuple -> demanded block
    std::map<std::pair<std::string, std::string>,
             std::map<std::vector<FieldElem>, std::vector<FieldElem>>>
        fibers;

    std::vector<FieldElem> tuple(symbols, 0);
    bool done = false;
    while (!done) {
        SymbolMap sym;
        for (std::size_t s = 0; s < S; ++s)
            sym[cs.source_order()[s]] = std::vector<FieldElem>(
                tuple.begin() + s * a.k(), tuple.begin() + (s + 1) * a.k());

        for (const auto& e : cs.coded_edges()) {
            std::vector<FieldElem> y(a.k(), 0);
            for (const auto& p : cs.producers(e)) {
                auto contrib = apply_local(f, a.local(p, e), sym.at(p));
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = f.add(y[i], contrib[i]);
            }
            sym[e] = std::move(y);
        }

        for (const auto& t : a.network().terminals) {
            std::vector<FieldElem> received;
            for (const auto& token : cs.terminal_inputs(t.node)) {
                const auto& block = sym.at(token);
                received.insert(received.end(), block.begin(), block.end());
            }
            for (const auto& d : t.demands) {
                auto& fiber = fibers[{t.node, d}];
                auto [it, fresh] = fiber.emplace(received, sym.at(d));
                if (!fresh && it->second != sym.at(d)) return false;
            }
        }

        done = true;
        for (std::size_t i = 0; i < symbols; ++i) {
            tuple[i] = static_cast<FieldElem>((tuple[i] + 1) % f.size());
            if (tuple[i] != 0) {
                done = false;
                break;
            }
        }
        if (symbols == 0) break;
    }
    return true;
}

CodingAssignment lift_assignment(const CodingAssignment& a, std::uint32_t factor)
{
    if (factor == 0) throw std::invalid_argument("lift factor must be >= 1");
    CodingAssignment lifted(a.structure_ptr(), a.field(), a.k() * factor);
    for (const auto& e : a.locals())
        lifted.add_local(e.producer, e.consumer, kron_identity(e.matrix, factor));
    return lifted;
}

std::string to_json(const CodingAssignment& a)
{
    nlohmann::ordered_json j;
    j["field"] = {{"p", a.field().characteristic()}, {"m", a.field().degree()}};
    j["k"] = a.k();
    j["local"] = nlohmann::ordered_json::array();
    for (const auto& e : a.locals()) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < e.matrix.rows(); ++r) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (std::size_t c = 0; c < e.matrix.cols(); ++c)
                row.push_back(e.matrix.at(r, c));
            rows.push_back(std::move(row));
        }
        j["local"].push_back({{"producer", e.producer},
                              {"consumer", e.consumer},
                              {"matrix", std::move(rows)}});
    }
    return j.dump(2) + "\n";
}

CodingAssignment assignment_from_json(const std::string& text, const Network& net)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("assignment must be a JSON object");

    auto field_it = j.find("field");
    if (field_it == j.end() || !field_it->is_object())
        throw ParseError("missing 'field' object");
    auto p_it = field_it->find("p");
    auto m_it = field_it->find("m");
    if (p_it == field_it->end() || !p_it->is_number_unsigned())
        throw ParseError("'field.p' must be an unsigned integer");
    if (m_it == field_it->end() || !m_it->is_number_unsigned())
        throw ParseError("'field.m' must be an unsigned integer");

    Field field = [&] {
        try {
            return Field::make(p_it->get<std::uint32_t>(), m_it->get<std::uint32_t>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("bad field: ") + e.what());
        }
    }();

    auto k_it = j.find("k");
    if (k_it == j.end() || !k_it->is_number_unsigned() || k_it->get<std::uint64_t>() == 0)
        throw ParseError("'k' must be a positive integer");
    std::uint32_t k = k_it->get<std::uint32_t>();

    CodingAssignment a(net, field, k);

    auto local_it = j.find("local");
    if (local_it == j.end() || !local_it->is_array())
        throw ParseError("'local' must be an array");
    for (const auto& je : *local_it) {
        auto get_str = [&](const char* key) {
            auto it = je.find(key);
            if (it == je.end() || !it->is_string())
                throw ParseError(std::string("local entry needs string '") + key + "'");
            return it->get<std::string>();
        };
        std::string producer = get_str("producer");
        std::string consumer = get_str("consumer");
        auto mat_it = je.find("matrix");
        if (mat_it == je.end() || !mat_it->is_array() || mat_it->size() != k)
            throw ParseError("local entry for (" + producer + ", " + consumer +
                             ") needs a " + std::to_string(k) + "-row matrix");
        FieldMatrix m(field, k, k);
        for (std::size_t r = 0; r < k; ++r) {
            const auto& row = (*mat_it)[r];
            if (!row.is_array() || row.size() != k)
                throw ParseError("matrix rows must have length " + std::to_string(k));
            for (std::size_t c = 0; c < k; ++c) {
                if (!row[c].is_number_unsigned())
                    throw ParseError("matrix entries must be unsigned integers");
                std::uint64_t v = row[c].get<std::uint64_t>();
                if (v >= field.size())
                    throw AssignmentMismatch("matrix entry " + std::to_string(v) +
                                             " is outside " + field.describe());
                m.set(r, c, static_cast<FieldElem>(v));
            }
        }
        a.add_local(producer, consumer, std::move(m));
    }
    return a;
}

} // namespace netcode
