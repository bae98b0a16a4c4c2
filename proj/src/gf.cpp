#include "netcode/gf.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace netcode {

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Little-endian coefficient vectors over GF(p). The leading coefficient of
// a stored polynomial is nonzero except for the zero polynomial (empty).
using Poly = std::vector<std::uint32_t>;

void poly_trim(Poly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p)
{
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>(
                (r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    poly_trim(r);
    return r;
}

std::uint32_t mod_inv_prime(std::uint32_t a, std::uint32_t p)
{
    // extended Euclid on integers
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p, new_r = a % p;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::swap(t -= q * new_t, new_t);
        std::swap(r -= q * new_r, new_r);
    }
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
}

// Remainder of a modulo b (b nonzero).
Poly poly_rem(Poly a, const Poly& b, std::uint32_t p)
{
    poly_trim(a);
    const std::uint32_t lead_inv = mod_inv_prime(b.back(), p);
    while (a.size() >= b.size()) {
        std::uint32_t c = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(a.back()) * lead_inv) % p);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            std::uint64_t sub = static_cast<std::uint64_t>(c) * b[i] % p;
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
        }
        poly_trim(a);
        if (a.empty()) break;
    }
    return a;
}

Poly poly_from_packed(std::uint64_t v, std::uint32_t p)
{
    Poly a;
    while (v != 0) {
        a.push_back(static_cast<std::uint32_t>(v % p));
        v /= p;
    }
    return a;
}

std::uint64_t poly_to_packed(const Poly& a, std::uint32_t p)
{
    std::uint64_t v = 0;
    for (std::size_t i = a.size(); i > 0; --i) v = v * p + a[i - 1];
    return v;
}

bool poly_is_irreducible(const Poly& f, std::uint32_t p)
{
    const std::size_t deg = f.size() - 1;
    // trial division by every monic polynomial of degree 1..deg/2
    for (std::size_t d = 1; 2 * d <= deg; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t low = 0; low < count; ++low) {
            Poly g = poly_from_packed(low, p);
            g.resize(d + 1, 0);
            g[d] = 1;
            if (poly_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

// First monic irreducible of degree m in packed order of the low coefficients.
Poly lowest_irreducible(std::uint32_t p, std::uint32_t m)
{
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < m; ++i) count *= p;
    for (std::uint64_t low = 0; low < count; ++low) {
        Poly f = poly_from_packed(low, p);
        f.resize(m + 1, 0);
        f[m] = 1;
        if (poly_is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found"); // unreachable
}

// Inverse in GF(p)[x]/(modulus) by extended Euclid.
Poly poly_mod_inverse(const Poly& a, const Poly& modulus, std::uint32_t p)
{
    Poly r0 = modulus, r1 = a;
    Poly t0 = {}, t1 = {1};
    poly_trim(r1);
    while (!r1.empty()) {
        // divide r0 by r1
        Poly q;
        Poly rem = r0;
        const std::uint32_t lead_inv = mod_inv_prime(r1.back(), p);
        if (rem.size() >= r1.size()) q.resize(rem.size() - r1.size() + 1, 0);
        while (rem.size() >= r1.size() && !rem.empty()) {
            std::uint32_t c = static_cast<std::uint32_t>(
                (static_cast<std::uint64_t>(rem.back()) * lead_inv) % p);
            std::size_t shift = rem.size() - r1.size();
            q[shift] = c;
            for (std::size_t i = 0; i < r1.size(); ++i) {
                std::uint64_t sub = static_cast<std::uint64_t>(c) * r1[i] % p;
                rem[shift + i] = static_cast<std::uint32_t>((rem[shift + i] + p - sub) % p);
            }
            poly_trim(rem);
        }
        Poly qt1 = poly_mul(q, t1, p);
        Poly nt(std::max(t0.size(), qt1.size()), 0);
        for (std::size_t i = 0; i < nt.size(); ++i) {
            std::uint32_t x = i < t0.size() ? t0[i] : 0;
            std::uint32_t y = i < qt1.size() ? qt1[i] : 0;
            nt[i] = (x + p - y) % p;
        }
        poly_trim(nt);
        t0 = std::move(t1);
        t1 = std::move(nt);
        r0 = std::move(r1);
        r1 = std::move(rem);
    }
    // r0 is gcd(a, modulus); for irreducible modulus and a != 0 it is a unit
    if (r0.size() != 1) throw std::logic_error("element not invertible");
    std::uint32_t scale = mod_inv_prime(r0[0], p);
    Poly out(t0.size());
    for (std::size_t i = 0; i < t0.size(); ++i)
        out[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(t0[i]) * scale % p);
    poly_trim(out);
    return out;
}

constexpr std::uint64_t kTableLimit = 512;

} // namespace

struct Field::Data {
    std::uint32_t p = 0;
    std::uint32_t m = 1;
    std::uint64_t size = 0;
    Poly modulus; // empty for m == 1
    bool tables = false;
    std::vector<FieldElem> add_table;
    std::vector<FieldElem> mul_table;
    std::vector<FieldElem> neg_table;
    std::vector<FieldElem> inv_table; // inv_table[0] unused

    FieldElem add_slow(FieldElem a, FieldElem b) const
    {
        FieldElem r = 0, scale = 1;
        for (std::uint32_t i = 0; i < m; ++i) {
            r += scale * ((a % p + b % p) % p);
            a /= p;
            b /= p;
            scale *= p;
        }
        return r;
    }

    FieldElem neg_slow(FieldElem a) const
    {
        FieldElem r = 0, scale = 1;
        for (std::uint32_t i = 0; i < m; ++i) {
            r += scale * ((p - a % p) % p);
            a /= p;
            scale *= p;
        }
        return r;
    }

    FieldElem mul_slow(FieldElem a, FieldElem b) const
    {
        if (m == 1) return static_cast<FieldElem>(
            static_cast<std::uint64_t>(a) * b % p);
        Poly prod = poly_mul(poly_from_packed(a, p), poly_from_packed(b, p), p);
        if (prod.size() >= modulus.size()) prod = poly_rem(prod, modulus, p);
        return static_cast<FieldElem>(poly_to_packed(prod, p));
    }

    FieldElem inv_slow(FieldElem a) const
    {
        if (m == 1) return mod_inv_prime(a, p);
        Poly r = poly_mod_inverse(poly_from_packed(a, p), modulus, p);
        return static_cast<FieldElem>(poly_to_packed(r, p));
    }
};

Field Field::make(std::uint32_t p, std::uint32_t m)
{
    if (!is_prime(p))
        throw std::invalid_argument("field characteristic must be prime, got " + std::to_string(p));
    if (m == 0)
        throw std::invalid_argument("field extension degree must be >= 1");
    if (m > 8)
        throw std::invalid_argument("extension degrees above 8 are not supported");

    auto d = std::make_shared<Data>();
    d->p = p;
    d->m = m;
    long double sz = 1;
    for (std::uint32_t i = 0; i < m; ++i) sz *= p;
    if (sz > 4294967295.0L)
        throw std::invalid_argument("field size p^m exceeds the supported range");
    d->size = 1;
    for (std::uint32_t i = 0; i < m; ++i) d->size *= p;
    if (m > 1) d->modulus = lowest_irreducible(p, m);

    if (d->size <= kTableLimit) {
        const std::size_t n = static_cast<std::size_t>(d->size);
        d->add_table.resize(n * n);
        d->mul_table.resize(n * n);
        d->neg_table.resize(n);
        d->inv_table.assign(n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            d->neg_table[a] = d->neg_slow(static_cast<FieldElem>(a));
            for (std::size_t b = 0; b < n; ++b) {
                d->add_table[a * n + b] =
                    d->add_slow(static_cast<FieldElem>(a), static_cast<FieldElem>(b));
                d->mul_table[a * n + b] =
                    d->mul_slow(static_cast<FieldElem>(a), static_cast<FieldElem>(b));
            }
        }
        for (std::size_t a = 1; a < n; ++a)
            d->inv_table[a] = d->inv_slow(static_cast<FieldElem>(a));
        d->tables = true;
    }
    return Field(std::move(d));
}

std::uint32_t Field::characteristic() const { return d_->p; }
std::uint32_t Field::degree() const { return d_->m; }
std::uint64_t Field::size() const { return d_->size; }
const std::vector<std::uint32_t>& Field::modulus() const { return d_->modulus; }

FieldElem Field::add(FieldElem a, FieldElem b) const
{
    if (d_->tables) return d_->add_table[a * d_->size + b];
    return d_->add_slow(a, b);
}

FieldElem Field::neg(FieldElem a) const
{
    if (d_->tables) return d_->neg_table[a];
    return d_->neg_slow(a);
}

FieldElem Field::sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

FieldElem Field::mul(FieldElem a, FieldElem b) const
{
    if (d_->tables) return d_->mul_table[a * d_->size + b];
    return d_->mul_slow(a, b);
}

std::optional<FieldElem> Field::inv(FieldElem a) const
{
    if (a == 0) return std::nullopt;
    if (d_->tables) return d_->inv_table[a];
    return d_->inv_slow(a);
}

FieldElem Field::from_integer(std::int64_t v) const
{
    std::int64_t r = v % d_->p;
    if (r < 0) r += d_->p;
    return static_cast<FieldElem>(r);
}

bool Field::characteristic_divides(std::uint64_t n) const { return n % d_->p == 0; }

std::string Field::describe() const
{
    if (d_->m == 1) return "GF(" + std::to_string(d_->p) + ")";
    return "GF(" + std::to_string(d_->p) + "^" + std::to_string(d_->m) + ")";
}

std::string Field::elem_to_string(FieldElem a) const { return std::to_string(a); }

bool Field::operator==(const Field& other) const
{
    return d_->p == other.d_->p && d_->m == other.d_->m;
}

// ---------------------------------------------------------------------------

FieldMatrix::FieldMatrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, 0)
{
}

FieldMatrix FieldMatrix::identity(const Field& field, std::size_t n)
{
    FieldMatrix r(field, n, n);
    for (std::size_t i = 0; i < n; ++i) r.set(i, i, field.one());
    return r;
}

FieldElem FieldMatrix::at(std::size_t r, std::size_t c) const
{
    return a_[r * cols_ + c];
}

void FieldMatrix::set(std::size_t r, std::size_t c, FieldElem v)
{
    if (!field_.valid_elem(v))
        throw std::invalid_argument("matrix entry " + std::to_string(v) +
                                    " is outside " + field_.describe());
    a_[r * cols_ + c] = v;
}

void FieldMatrix::paste(std::size_t r0, std::size_t c0, const FieldMatrix& block)
{
    if (block.field_ != field_)
        throw std::invalid_argument("paste: field mismatch");
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_)
        throw std::invalid_argument("paste: block exceeds matrix bounds");
    for (std::size_t r = 0; r < block.rows_; ++r)
        for (std::size_t c = 0; c < block.cols_; ++c)
            a_[(r0 + r) * cols_ + (c0 + c)] = block.at(r, c);
}

FieldMatrix FieldMatrix::operator+(const FieldMatrix& other) const
{
    if (field_ != other.field_ || rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix add: shape or field mismatch");
    FieldMatrix r(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.add(a_[i], other.a_[i]);
    return r;
}

FieldMatrix FieldMatrix::operator-(const FieldMatrix& other) const
{
    if (field_ != other.field_ || rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix sub: shape or field mismatch");
    FieldMatrix r(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.sub(a_[i], other.a_[i]);
    return r;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& other) const
{
    return mat_mul(*this, other);
}

FieldMatrix FieldMatrix::scaled(FieldElem c) const
{
    FieldMatrix r(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.mul(a_[i], c);
    return r;
}

FieldMatrix FieldMatrix::negated() const
{
    FieldMatrix r(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.neg(a_[i]);
    return r;
}

bool FieldMatrix::is_zero() const
{
    return std::all_of(a_.begin(), a_.end(), [](FieldElem v) { return v == 0; });
}

bool FieldMatrix::operator==(const FieldMatrix& other) const
{
    return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           a_ == other.a_;
}

std::string FieldMatrix::to_string() const
{
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r) {
        os << (r == 0 ? "[" : " ");
        for (std::size_t c = 0; c < cols_; ++c)
            os << (c == 0 ? "[" : " ") << at(r, c);
        os << "]" << (r + 1 == rows_ ? "]" : "\n");
    }
    if (rows_ == 0) os << "[]";
    return os.str();
}

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b)
{
    if (a.field() != b.field())
        throw std::invalid_argument("mat_mul: field mismatch");
    if (a.cols() != b.rows())
        throw std::invalid_argument("mat_mul: inner dimensions disagree");
    const Field& f = a.field();
    FieldMatrix r(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            FieldElem aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                r.set(i, j, f.add(r.at(i, j), f.mul(aik, b.at(k, j))));
        }
    return r;
}

namespace {

// Row-reduces `rows` in place to reduced row echelon form, applying the same
// operations to `companion` when present. Returns pivot columns in order.
std::vector<std::size_t> rref_in_place(std::vector<std::vector<FieldElem>>& rows,
                                       std::vector<std::vector<FieldElem>>* companion,
                                       const Field& f)
{
    std::vector<std::size_t> pivots;
    if (rows.empty()) return pivots;
    const std::size_t ncols = rows[0].size();
    std::size_t pr = 0;
    for (std::size_t pc = 0; pc < ncols && pr < rows.size(); ++pc) {
        std::size_t sel = pr;
        while (sel < rows.size() && rows[sel][pc] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[pr]);
        if (companion) std::swap((*companion)[sel], (*companion)[pr]);
        FieldElem s = *f.inv(rows[pr][pc]);
        for (auto& v : rows[pr]) v = f.mul(v, s);
        if (companion)
            for (auto& v : (*companion)[pr]) v = f.mul(v, s);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pr || rows[r][pc] == 0) continue;
            FieldElem c = rows[r][pc];
            for (std::size_t j = 0; j < ncols; ++j)
                rows[r][j] = f.sub(rows[r][j], f.mul(c, rows[pr][j]));
            if (companion)
                for (std::size_t j = 0; j < (*companion)[r].size(); ++j)
                    (*companion)[r][j] =
                        f.sub((*companion)[r][j], f.mul(c, (*companion)[pr][j]));
        }
        pivots.push_back(pc);
        ++pr;
    }
    return pivots;
}

std::vector<std::vector<FieldElem>> to_rows(const FieldMatrix& a)
{
    std::vector<std::vector<FieldElem>> rows(a.rows(), std::vector<FieldElem>(a.cols()));
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) rows[r][c] = a.at(r, c);
    return rows;
}

} // namespace

std::size_t mat_rank(const FieldMatrix& a)
{
    auto rows = to_rows(a);
    return rref_in_place(rows, nullptr, a.field()).size();
}

std::optional<FieldMatrix> mat_inverse(const FieldMatrix& a)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("mat_inverse: matrix is not square");
    const Field& f = a.field();
    const std::size_t n = a.rows();
    auto rows = to_rows(a);
    std::vector<std::vector<FieldElem>> comp(n, std::vector<FieldElem>(n, 0));
    for (std::size_t i = 0; i < n; ++i) comp[i][i] = f.one();
    auto pivots = rref_in_place(rows, &comp, f);
    if (pivots.size() != n) return std::nullopt;
    FieldMatrix inv(f, n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv.set(r, c, comp[r][c]);
    return inv;
}

std::optional<FieldMatrix> solve_left(const FieldMatrix& g, const FieldMatrix& target)
{
    if (g.field() != target.field())
        throw std::invalid_argument("solve_left: field mismatch");
    if (g.cols() != target.cols())
        throw std::invalid_argument("solve_left: column counts disagree");
    const Field& f = g.field();
    auto rows = to_rows(g);
    std::vector<std::vector<FieldElem>> comp(g.rows(), std::vector<FieldElem>(g.rows(), 0));
    for (std::size_t i = 0; i < g.rows(); ++i) comp[i][i] = f.one();
    auto pivots = rref_in_place(rows, &comp, f);

    FieldMatrix x(f, target.rows(), g.rows());
    std::vector<FieldElem> residual(g.cols());
    for (std::size_t tr = 0; tr < target.rows(); ++tr) {
        for (std::size_t c = 0; c < g.cols(); ++c) residual[c] = target.at(tr, c);
        std::vector<FieldElem> coef(pivots.size(), 0);
        for (std::size_t pi = 0; pi < pivots.size(); ++pi) {
            FieldElem c = residual[pivots[pi]];
            coef[pi] = c;
            if (c == 0) continue;
            for (std::size_t j = 0; j < residual.size(); ++j)
                residual[j] = f.sub(residual[j], f.mul(c, rows[pi][j]));
        }
        if (std::any_of(residual.begin(), residual.end(),
                        [](FieldElem v) { return v != 0; }))
            return std::nullopt;
        for (std::size_t pi = 0; pi < pivots.size(); ++pi) {
            if (coef[pi] == 0) continue;
            for (std::size_t j = 0; j < g.rows(); ++j)
                x.set(tr, j, f.add(x.at(tr, j), f.mul(coef[pi], comp[pi][j])));
        }
    }
    return x;
}

FieldMatrix kron_identity(const FieldMatrix& a, std::uint32_t k)
{
    if (k == 0) throw std::invalid_argument("kron_identity: k must be >= 1");
    FieldMatrix r(a.field(), a.rows() * k, a.cols() * k);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            FieldElem v = a.at(i, j);
            if (v == 0) continue;
            for (std::uint32_t t = 0; t < k; ++t)
                r.set(i * k + t, j * k + t, v);
        }
    return r;
}

FieldMatrix vstack(const FieldMatrix& a, const FieldMatrix& b)
{
    if (a.field() != b.field() || a.cols() != b.cols())
        throw std::invalid_argument("vstack: shape or field mismatch");
    FieldMatrix r(a.field(), a.rows() + b.rows(), a.cols());
    r.paste(0, 0, a);
    r.paste(a.rows(), 0, b);
    return r;
}

FieldMatrix hstack(const FieldMatrix& a, const FieldMatrix& b)
{
    if (a.field() != b.field() || a.rows() != b.rows())
        throw std::invalid_argument("hstack: shape or field mismatch");
    FieldMatrix r(a.field(), a.rows(), a.cols() + b.cols());
    r.paste(0, 0, a);
    r.paste(0, a.cols(), b);
    return r;
}

FieldMatrix random_matrix(const Field& field, std::size_t rows, std::size_t cols,
                          std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::uint64_t> dist(0, field.size() - 1);
    FieldMatrix r(field, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            r.set(i, j, static_cast<FieldElem>(dist(rng)));
    return r;
}

} // namespace netcode
