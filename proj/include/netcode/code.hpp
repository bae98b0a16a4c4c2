#ifndef NETCODE_CODE_HPP
#define NETCODE_CODE_HPP

#include "netcode/gf.hpp"
#include "netcode/network.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netcode {

/// A requested computation would enumerate more cases than allowed.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An assignment names producers/consumers or uses a field inconsistent
/// with the network it is attached to.
class AssignmentMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LocalEntry {
    std::string producer; // source label or coded-edge id feeding `consumer`
    std::string consumer; // coded-edge id
    FieldMatrix matrix;   // k x k
};

/// Local coding matrices for the coded edges of one network. Pairs not
/// present are implicitly zero; fan-out copies are implicitly identity.
/// Terminal decoders are not stored: they are solved for on demand.
class CodingAssignment {
public:
    CodingAssignment(const Network& net, Field field, std::uint32_t k);
    CodingAssignment(std::shared_ptr<const CodingStructure> cs, Field field,
                     std::uint32_t k);

    const Network& network() const { return cs_->network(); }
    const CodingStructure& structure() const { return *cs_; }
    std::shared_ptr<const CodingStructure> structure_ptr() const { return cs_; }
    const Field& field() const { return field_; }
    std::uint32_t k() const { return k_; }

    /// Registers the matrix weighting `producer` in the combination carried
    /// by coded edge `consumer`. Throws AssignmentMismatch for unknown
    /// names, producers that do not feed the consumer, duplicate pairs, or
    /// shape/field mismatches.
    void add_local(const std::string& producer, const std::string& consumer,
                   FieldMatrix matrix);

    /// The registered matrix, or nullptr when the pair defaults to zero.
    const FieldMatrix* local(const std::string& producer,
                             const std::string& consumer) const;

    const std::vector<LocalEntry>& locals() const { return locals_; }

private:
    std::shared_ptr<const CodingStructure> cs_;
    Field field_;
    std::uint32_t k_;
    std::vector<LocalEntry> locals_;
    std::map<std::pair<std::string, std::string>, std::size_t> index_;
};

/// Global coding matrices: for each coded edge, the k x (S*k) map from the
/// stacked source blocks (in recorded source order) to the edge's symbol.
class GlobalCode {
public:
    GlobalCode(std::shared_ptr<const CodingStructure> cs, Field field, std::uint32_t k);

    const CodingStructure& structure() const { return *cs_; }
    const Field& field() const { return field_; }
    std::uint32_t k() const { return k_; }
    std::size_t source_count() const { return cs_->source_order().size(); }

    const FieldMatrix& of_coded(const std::string& coded_edge) const;
    void set_coded(const std::string& coded_edge, FieldMatrix m);

    /// Selector row block of a source label: identity in that source's
    /// column block, zero elsewhere.
    FieldMatrix selector(const std::string& label) const;

    /// Matrix carried by a producer token (coded edge or source label).
    FieldMatrix of_token(const std::string& token) const;

    /// vstack of of_token over the terminal's inputs, in input order.
    FieldMatrix stacked_inputs(const std::string& terminal) const;

private:
    std::shared_ptr<const CodingStructure> cs_;
    Field field_;
    std::uint32_t k_;
    std::map<std::string, FieldMatrix> coded_;
};

/// Propagates local matrices to global ones in topological order.
GlobalCode global_codes(const CodingAssignment& a);

struct DecodeOutcome {
    std::optional<FieldMatrix> decoder; // k x (inputs*k); X * G_t = selector
    std::size_t rank_deficit = 0;       // selector rows missing from row space
};

/// Whether terminal `t` can linearly recover source `label` from its
/// inputs under global code `g`. Throws std::invalid_argument for unknown
/// terminal or label.
DecodeOutcome decodable(const GlobalCode& g, const std::string& terminal,
                        const std::string& label);

struct DemandVerdict {
    std::string terminal;
    std::string label;
    bool ok = false;
    std::size_t rank_deficit = 0;
    std::optional<FieldMatrix> decoder;
};

struct SolvabilityReport {
    bool solved = false;
    std::vector<DemandVerdict> demands;

    std::string summary() const;
    const DemandVerdict* first_failure() const;
};

SolvabilityReport verify_solution(const CodingAssignment& a);

inline constexpr std::uint64_t kFunctionCheckBudget = 1ull << 20;

/// Independent oracle: enumerates every source tuple, pushes actual symbol
/// vectors through the network, and checks each demanded block is a
/// well-defined function of what its terminal receives. Throws
/// BudgetExceeded when (p^m)^(S*k) exceeds `budget`.
bool function_check(const CodingAssignment& a,
                    std::uint64_t budget = kFunctionCheckBudget);

/// Block-lifts every local matrix by `factor`, multiplying k.
CodingAssignment lift_assignment(const CodingAssignment& a, std::uint32_t factor);

std::string to_json(const CodingAssignment& a);

/// Parses an assignment and attaches it to `net`. Throws ParseError on
/// malformed input, AssignmentMismatch on semantic mismatches.
CodingAssignment assignment_from_json(const std::string& text, const Network& net);

} // namespace netcode

#endif
