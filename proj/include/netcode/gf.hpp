#ifndef NETCODE_GF_HPP
#define NETCODE_GF_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace netcode {

/// An element of GF(p^m), packed as sum c_i * p^i with coefficients
/// c_0..c_{m-1} in [0, p). For prime fields (m = 1) this is the residue.
using FieldElem = std::uint32_t;

bool is_prime(std::uint64_t n);

/// A prime-power finite field GF(p^m). Immutable and cheap to copy;
/// equality is (p, m) since the reduction polynomial is canonical.
class Field {
public:
    /// Builds GF(p^m). For m > 1 the reduction polynomial is the first
    /// monic irreducible of degree m in coefficient-packed order.
    /// Throws std::invalid_argument for composite p or m = 0.
    static Field make(std::uint32_t p, std::uint32_t m = 1);

    std::uint32_t characteristic() const;
    std::uint32_t degree() const;
    std::uint64_t size() const;

    /// Reduction polynomial as m+1 little-endian coefficients (monic).
    /// Empty for prime fields.
    const std::vector<std::uint32_t>& modulus() const;

    FieldElem zero() const { return 0; }
    FieldElem one() const { return 1; }

    FieldElem add(FieldElem a, FieldElem b) const;
    FieldElem sub(FieldElem a, FieldElem b) const;
    FieldElem neg(FieldElem a) const;
    FieldElem mul(FieldElem a, FieldElem b) const;
    std::optional<FieldElem> inv(FieldElem a) const;

    /// Embeds an integer as a constant polynomial (value mod p).
    FieldElem from_integer(std::int64_t v) const;

    /// Whether the characteristic divides n, i.e. n maps to zero.
    bool characteristic_divides(std::uint64_t n) const;

    bool valid_elem(FieldElem a) const { return a < size(); }

    std::string describe() const;                 // "GF(3)" or "GF(2^4)"
    std::string elem_to_string(FieldElem a) const;

    bool operator==(const Field& other) const;
    bool operator!=(const Field& other) const { return !(*this == other); }

private:
    struct Data;
    explicit Field(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

/// Spec-facing constructor name.
inline Field field_new(std::uint32_t p, std::uint32_t m = 1) { return Field::make(p, m); }

/// Dense row-major matrix over a Field. Values are immutable in spirit:
/// operations return new matrices, mutation is limited to construction.
class FieldMatrix {
public:
    FieldMatrix(Field field, std::size_t rows, std::size_t cols);

    static FieldMatrix identity(const Field& field, std::size_t n);
    static FieldMatrix zero(const Field& field, std::size_t rows, std::size_t cols)
    {
        return FieldMatrix(field, rows, cols);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    FieldElem at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, FieldElem v);

    /// Writes `block` into this matrix with its top-left corner at (r0, c0).
    void paste(std::size_t r0, std::size_t c0, const FieldMatrix& block);

    FieldMatrix operator+(const FieldMatrix& other) const;
    FieldMatrix operator-(const FieldMatrix& other) const;
    FieldMatrix operator*(const FieldMatrix& other) const;
    FieldMatrix scaled(FieldElem c) const;
    FieldMatrix negated() const;

    bool is_zero() const;
    bool operator==(const FieldMatrix& other) const;
    bool operator!=(const FieldMatrix& other) const { return !(*this == other); }

    std::string to_string() const;

private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<FieldElem> a_;
};

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b);

std::size_t mat_rank(const FieldMatrix& a);

/// Inverse of a square matrix, or nullopt when singular.
/// Throws std::invalid_argument for non-square input.
std::optional<FieldMatrix> mat_inverse(const FieldMatrix& a);

/// Solves X * g = target. Returns nullopt when some row of `target` lies
/// outside the row space of `g`. Free variables are fixed to zero, so the
/// result is deterministic.
std::optional<FieldMatrix> solve_left(const FieldMatrix& g, const FieldMatrix& target);

/// Block-lifts `a` by k: block (i, j) of the result is a(i,j) * I_k.
FieldMatrix kron_identity(const FieldMatrix& a, std::uint32_t k);

/// Stacks a on top of b (same column count).
FieldMatrix vstack(const FieldMatrix& a, const FieldMatrix& b);

/// Concatenates a and b side by side (same row count).
FieldMatrix hstack(const FieldMatrix& a, const FieldMatrix& b);

FieldMatrix random_matrix(const Field& field, std::size_t rows, std::size_t cols,
                          std::mt19937_64& rng);

} // namespace netcode

#endif
