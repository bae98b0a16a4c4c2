#ifndef NETCODE_SOLUTIONS_HPP
#define NETCODE_SOLUTIONS_HPP

#include "netcode/code.hpp"
#include "netcode/families.hpp"

#include <cstdint>
#include <stdexcept>

namespace netcode {

/// The field's characteristic is on the wrong side of the divides-q
/// condition for the requested construction.
class CharacteristicMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The plus/minus-ones coefficient pattern for any Fano-family network
/// (coded edges E13, E24, E57, E68, E_i, E910):
///   E13 = a + sum b_i, E24 = sum b_i + c, E57 = E13 - E24, E68 = E13 - c,
///   E_i = E24 - sum_{j != i} b_j, E910 = E68 - E57.
/// Constructible over any field; it verifies exactly when the
/// characteristic divides q. Scalar coefficients are lifted to v * I_k.
CodingAssignment fano_pattern(const Network& net, const Field& field,
                              std::uint32_t k = 1);

/// The all-ones pattern for any non-Fano-family network (coded edges e_a,
/// e_i, e_b). Verifies exactly when the characteristic does not divide q.
CodingAssignment non_fano_pattern(const Network& net, const Field& field,
                                  std::uint32_t k = 1);

/// Explicit k-dimensional solution of generalized_fano(q). Requires the
/// field characteristic to divide q; throws CharacteristicMismatch
/// otherwise (the t_{q+1} decode a - q*c collapses to a only when q = 0 in
/// the field).
CodingAssignment fano_solution(std::uint32_t q, const Field& field,
                               std::uint32_t k = 1);

/// Explicit k-dimensional solution of generalized_non_fano(q). Requires
/// the characteristic to not divide q (the decoder divides by q).
CodingAssignment non_fano_solution(std::uint32_t q, const Field& field,
                                   std::uint32_t k = 1);

} // namespace netcode

#endif
