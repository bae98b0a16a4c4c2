#ifndef NETCODE_FAMILIES_HPP
#define NETCODE_FAMILIES_HPP

#include "netcode/network.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace netcode {

/// Sources a, b1..b{q-1}, c; coded edges E13, E24, E57, E68, E_1..E_{q-1},
/// E910; terminals t1..t{2q}. Throws std::invalid_argument for q < 2.
Network generalized_fano(std::uint32_t q);

/// Sources a, b1..bq; coded edges e_a, e_1..e_q, e_b; terminals t1..t{q+2}.
/// Throws std::invalid_argument for q < 2.
Network generalized_non_fano(std::uint32_t q);

struct ClassicVariants {
    Network fano;
    Network non_fano;
    Network modified_fano;
    Network modified_non_fano;
};

/// The four q=2 specializations. modified_fano is generalized_fano(2);
/// the other three follow the classical topologies (fano drops terminal t4,
/// non_fano widens t4's demands, modified_non_fano hands t4 the message a
/// directly) and are marked with a "reconstructed-from-proof-text"
/// provenance note.
ClassicVariants classic_variants();

/// Product of prime powers, overflow-checked. `exponents` defaults to all
/// ones and must match `primes` in length when given. Throws
/// std::invalid_argument on non-primes, duplicates, empty input, zero
/// exponents, or overflow.
std::uint64_t q_from_primes(const std::vector<std::uint32_t>& primes,
                            const std::vector<std::uint32_t>& exponents = {});

/// Dispatch by family name ("gen_fano", "gen_non_fano", "fano", "non_fano",
/// "modified_fano", "modified_non_fano"; dashes accepted for underscores).
/// Classic variants require q = 2.
Network make_family(const std::string& family, std::uint32_t q);

} // namespace netcode

#endif
