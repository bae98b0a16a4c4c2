#include "netcode/families.hpp"

#include "netcode/gf.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace netcode {

namespace {

// Assembles a network from coded-edge producer lists using the node-pair
// convention: coded edge X runs X.in -> X.out, producers feed X.in, and
// consumers read copies from X.out (or straight from a source node).
class NetBuilder {
public:
    void add_source(const std::string& label)
    {
        net_.nodes.push_back({label, NodeKind::Source});
        net_.sources.push_back({label, label});
        source_labels_.insert(label);
    }

    void add_coded(const std::string& id, const std::vector<std::string>& producers)
    {
        net_.nodes.push_back({id + ".in", NodeKind::Intermediate});
        net_.nodes.push_back({id + ".out", NodeKind::Intermediate});
        for (const auto& p : producers)
            net_.edges.push_back({p + "->" + id, out_node(p), id + ".in", 0});
        net_.edges.push_back({id, id + ".in", id + ".out", 0});
    }

    void add_terminal(const std::string& id, const std::vector<std::string>& inputs,
                      const std::vector<std::string>& demands)
    {
        net_.nodes.push_back({id, NodeKind::Terminal});
        for (const auto& p : inputs)
            net_.edges.push_back({p + "->" + id, out_node(p), id, 0});
        net_.terminals.push_back({id, demands});
    }

    Network build(std::string family, std::uint32_t q, std::string provenance = "")
    {
        net_.meta.family = std::move(family);
        net_.meta.q = q;
        net_.meta.provenance = std::move(provenance);
        if (auto bad = network_validate(net_))
            throw InvalidNetwork(*bad); // generator bug, not user error
        return std::move(net_);
    }

private:
    std::string out_node(const std::string& producer) const
    {
        return source_labels_.count(producer) ? producer : producer + ".out";
    }

    Network net_;
    std::set<std::string> source_labels_;
};

std::string b(std::uint32_t i) { return "b" + std::to_string(i); }
std::string t(std::uint32_t i) { return "t" + std::to_string(i); }

void require_q(std::uint32_t q)
{
    if (q < 2)
        throw std::invalid_argument("family parameter q must be >= 2, got " +
                                    std::to_string(q));
}

} // namespace

Network generalized_fano(std::uint32_t q)
{
    require_q(q);
    NetBuilder nb;

    nb.add_source("a");
    for (std::uint32_t i = 1; i <= q - 1; ++i) nb.add_source(b(i));
    nb.add_source("c");

    std::vector<std::string> bs;
    for (std::uint32_t i = 1; i <= q - 1; ++i) bs.push_back(b(i));

    std::vector<std::string> e13 = {"a"};
    e13.insert(e13.end(), bs.begin(), bs.end());
    nb.add_coded("E13", e13);

    std::vector<std::string> e24 = bs;
    e24.push_back("c");
    nb.add_coded("E24", e24);

    nb.add_coded("E57", {"E13", "E24"});
    nb.add_coded("E68", {"E13", "c"});

    std::vector<std::string> ei_names;
    for (std::uint32_t i = 1; i <= q - 1; ++i) {
        std::string name = "E_" + std::to_string(i);
        ei_names.push_back(name);
        std::vector<std::string> prods = {"E24"};
        for (std::uint32_t j = 1; j <= q - 1; ++j)
            if (j != i) prods.push_back(b(j));
        nb.add_coded(name, prods);
    }

    nb.add_coded("E910", {"E57", "E68"});

    nb.add_terminal(t(1), {"E57", "a"}, {"c"});
    for (std::uint32_t i = 1; i <= q - 1; ++i) {
        std::vector<std::string> in = {"E910"};
        for (std::uint32_t j = 1; j <= q - 1; ++j)
            if (j != i) in.push_back(b(j));
        nb.add_terminal(t(1 + i), in, {b(i)});
    }
    std::vector<std::string> tq1 = {"E68"};
    tq1.insert(tq1.end(), ei_names.begin(), ei_names.end());
    nb.add_terminal(t(q + 1), tq1, {"a"});
    for (std::uint32_t i = 1; i <= q - 1; ++i)
        nb.add_terminal(t(q + 1 + i), {ei_names[i - 1], b(i)}, {"c"});

    return nb.build("gen_fano", q);
}

Network generalized_non_fano(std::uint32_t q)
{
    require_q(q);
    NetBuilder nb;

    nb.add_source("a");
    for (std::uint32_t i = 1; i <= q; ++i) nb.add_source(b(i));

    std::vector<std::string> bs;
    for (std::uint32_t i = 1; i <= q; ++i) bs.push_back(b(i));

    std::vector<std::string> ea = {"a"};
    ea.insert(ea.end(), bs.begin(), bs.end());
    nb.add_coded("e_a", ea);

    std::vector<std::string> ei_names;
    for (std::uint32_t i = 1; i <= q; ++i) {
        std::string name = "e_" + std::to_string(i);
        ei_names.push_back(name);
        std::vector<std::string> prods = {"a"};
        for (std::uint32_t j = 1; j <= q; ++j)
            if (j != i) prods.push_back(b(j));
        nb.add_coded(name, prods);
    }

    nb.add_coded("e_b", bs);

    nb.add_terminal(t(1), {"e_a", "e_b"}, {"a"});
    for (std::uint32_t i = 1; i <= q; ++i)
        nb.add_terminal(t(1 + i), {"e_a", ei_names[i - 1]}, {b(i)});
    std::vector<std::string> tq2 = ei_names;
    tq2.push_back("e_b");
    nb.add_terminal(t(q + 2), tq2, {"a"});

    return nb.build("gen_non_fano", q);
}

ClassicVariants classic_variants()
{
    ClassicVariants v;

    v.modified_fano = generalized_fano(2);
    v.modified_fano.meta.family = "modified_fano";

    // classic Fano: drop terminal t4 and the edges into it, keeping
    // everything else, so the result is a literal sub-network
    v.fano = generalized_fano(2);
    v.fano.meta.family = "fano";
    v.fano.meta.provenance = "reconstructed-from-proof-text";
    v.fano.nodes.erase(std::remove_if(v.fano.nodes.begin(), v.fano.nodes.end(),
                                      [](const Node& n) { return n.id == "t4"; }),
                       v.fano.nodes.end());
    v.fano.edges.erase(std::remove_if(v.fano.edges.begin(), v.fano.edges.end(),
                                      [](const Edge& e) { return e.head == "t4"; }),
                       v.fano.edges.end());
    v.fano.terminals.erase(
        std::remove_if(v.fano.terminals.begin(), v.fano.terminals.end(),
                       [](const Terminal& t) { return t.node == "t4"; }),
        v.fano.terminals.end());

    // classic non-Fano: t4 must recover every message from {e_1, e_2, e_b}
    v.non_fano = generalized_non_fano(2);
    v.non_fano.meta.family = "non_fano";
    v.non_fano.meta.provenance = "reconstructed-from-proof-text";
    for (auto& term : v.non_fano.terminals)
        if (term.node == "t4") term.demands = {"a", "b1", "b2"};

    // modified non-Fano: t4 gets a directly instead of e_b and owes b1, b2
    v.modified_non_fano = generalized_non_fano(2);
    v.modified_non_fano.meta.family = "modified_non_fano";
    v.modified_non_fano.meta.provenance = "reconstructed-from-proof-text";
    for (auto& e : v.modified_non_fano.edges)
        if (e.id == "e_b->t4") e = {"a->t4", "a", "t4", 0};
    for (auto& term : v.modified_non_fano.terminals)
        if (term.node == "t4") term.demands = {"b1", "b2"};

    for (const Network* n :
         {&v.fano, &v.non_fano, &v.modified_fano, &v.modified_non_fano})
        if (auto bad = network_validate(*n)) throw InvalidNetwork(*bad);

    return v;
}

std::uint64_t q_from_primes(const std::vector<std::uint32_t>& primes,
                            const std::vector<std::uint32_t>& exponents)
{
    if (primes.empty()) throw std::invalid_argument("prime set must be nonempty");
    if (!exponents.empty() && exponents.size() != primes.size())
        throw std::invalid_argument("exponent list length must match prime list");

    std::set<std::uint32_t> seen;
    std::uint64_t q = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!is_prime(primes[i]))
            throw std::invalid_argument(std::to_string(primes[i]) + " is not prime");
        if (!seen.insert(primes[i]).second)
            throw std::invalid_argument("duplicate prime " + std::to_string(primes[i]));
        std::uint32_t r = exponents.empty() ? 1 : exponents[i];
        if (r == 0) throw std::invalid_argument("exponents must be >= 1");
        for (std::uint32_t e = 0; e < r; ++e) {
            if (__builtin_mul_overflow(q, static_cast<std::uint64_t>(primes[i]), &q))
                throw std::invalid_argument("prime-power product overflows");
        }
    }
    return q;
}

Network make_family(const std::string& family, std::uint32_t q)
{
    std::string name = family;
    std::replace(name.begin(), name.end(), '-', '_');

    if (name == "gen_fano") return generalized_fano(q);
    if (name == "gen_non_fano") return generalized_non_fano(q);

    if (name == "fano" || name == "non_fano" || name == "modified_fano" ||
        name == "modified_non_fano") {
        if (q != 2)
            throw std::invalid_argument("family '" + name + "' is fixed at q = 2");
        ClassicVariants v = classic_variants();
        if (name == "fano") return v.fano;
        if (name == "non_fano") return v.non_fano;
        if (name == "modified_fano") return v.modified_fano;
        return v.modified_non_fano;
    }

    throw std::invalid_argument("unknown family '" + family + "'");
}

} // namespace netcode
