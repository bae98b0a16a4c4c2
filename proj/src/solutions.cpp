#include "netcode/solutions.hpp"

namespace netcode {

namespace {

FieldMatrix block(const Field& f, std::uint32_t k, FieldElem v)
{
    return FieldMatrix::identity(f, k).scaled(v);
}

} // namespace

CodingAssignment fano_pattern(const Network& net, const Field& field, std::uint32_t k)
{
    CodingAssignment a(net, field, k);
    const CodingStructure& cs = a.structure();
    const FieldElem one = field.one();
    const FieldElem neg = field.neg(one);

    for (const auto& e : cs.coded_edges()) {
        for (const auto& p : cs.producers(e)) {
            FieldElem v;
            if (e == "E13" || e == "E24")
                v = one;
            else if (e == "E57")
                v = (p == "E13") ? one : neg;
            else if (e == "E68")
                v = (p == "E13") ? one : neg;
            else if (e == "E910")
                v = (p == "E68") ? one : neg;
            else if (e.starts_with("E_"))
                v = (p == "E24") ? one : neg;
            else
                throw std::invalid_argument("coded edge '" + e +
                                            "' does not belong to a Fano-family network");
            a.add_local(p, e, block(field, k, v));
        }
    }
    return a;
}

CodingAssignment non_fano_pattern(const Network& net, const Field& field, std::uint32_t k)
{
    CodingAssignment a(net, field, k);
    const CodingStructure& cs = a.structure();
    for (const auto& e : cs.coded_edges()) {
        if (e != "e_a" && e != "e_b" && !e.starts_with("e_"))
            throw std::invalid_argument(
                "coded edge '" + e + "' does not belong to a non-Fano-family network");
        for (const auto& p : cs.producers(e))
            a.add_local(p, e, block(field, k, field.one()));
    }
    return a;
}

CodingAssignment fano_solution(std::uint32_t q, const Field& field, std::uint32_t k)
{
    if (!field.characteristic_divides(q))
        throw CharacteristicMismatch(
            "characteristic " + std::to_string(field.characteristic()) +
            " does not divide " + std::to_string(q));
    return fano_pattern(generalized_fano(q), field, k);
}

CodingAssignment non_fano_solution(std::uint32_t q, const Field& field, std::uint32_t k)
{
    if (field.characteristic_divides(q))
        throw CharacteristicMismatch("characteristic " +
                                     std::to_string(field.characteristic()) +
                                     " divides " + std::to_string(q));
    return non_fano_pattern(generalized_non_fano(q), field, k);
}

} // namespace netcode
