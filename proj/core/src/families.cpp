#include "cqc/families.hpp"

#include <cmath>
#include <stdexcept>

namespace cqc {

std::string to_string(Family f) {
    return f == Family::CycleChain ? "cycle-chain" : "chain-star";
}

Family family_from_string(const std::string& s) {
    if (s == "cycle-chain") return Family::CycleChain;
    if (s == "chain-star") return Family::ChainStar;
    throw Error("unknown family: " + s + " (expected cycle-chain or chain-star)");
}

namespace {

const std::string kEdge = "E";

// Zero-padded so that the canonical byte-wise row order matches y_0 < y_1 < ...
std::string padded_name(int k, int width) {
    std::string digits = std::to_string(k);
    return "y" + std::string(width - digits.size(), '0') + digits;
}

Schema graph_schema() { return Schema{{{kEdge, 2}}}; }

Query two_cycle() {
    const Term z0 = Term::variable("z0");
    const Term z1 = Term::variable("z1");
    return Query::make(graph_schema(), {{kEdge, {{z0, z1}, {z1, z0}}}}, {});
}

Query two_chain() {
    const Term z0 = Term::variable("z0");
    const Term z1 = Term::variable("z1");
    const Term z2 = Term::variable("z2");
    return Query::make(graph_schema(), {{kEdge, {{z0, z1}, {z1, z2}}}}, {});
}

std::vector<Term> chain_nodes(int i) {
    const int width = static_cast<int>(std::to_string(i).size());
    std::vector<Term> nodes;
    nodes.reserve(i + 1);
    for (int k = 0; k <= i; ++k) nodes.push_back(Term::variable(padded_name(k, width)));
    return nodes;
}

}  // namespace

FamilyInstance gen_cycle_chain(int i) {
    if (i < 1) throw std::invalid_argument("family parameter i must be >= 1");
    FamilyInstance inst;
    inst.family = Family::CycleChain;
    inst.i = i;
    inst.q1 = two_cycle();

    const std::vector<Term> nodes = chain_nodes(i);
    std::vector<Tuple> edges;
    for (int k = 1; k <= i; ++k) edges.push_back({nodes[k - 1], nodes[k]});
    inst.q2 = Query::make(graph_schema(), {{kEdge, std::move(edges)}}, {});

    inst.num_vars = 2 * (i + 1);
    inst.penalty_weight = 2 * i + 1;
    inst.d = -i;
    // Wrap the chain around the cycle: rows alternate 10, 01 starting with
    // either node of the cycle.
    std::vector<std::uint8_t> h(inst.num_vars, 0), h2(inst.num_vars, 0);
    for (int k = 0; k <= i; ++k) {
        h[2 * k + (k % 2)] = 1;
        h2[2 * k + 1 - (k % 2)] = 1;
    }
    inst.ground_truth = {std::move(h), std::move(h2)};
    return inst;
}

FamilyInstance gen_chain_star(int i) {
    if (i < 1) throw std::invalid_argument("family parameter i must be >= 1");
    FamilyInstance inst;
    inst.family = Family::ChainStar;
    inst.i = i;
    inst.q1 = two_chain();

    const std::vector<Term> nodes = chain_nodes(i);
    std::vector<Tuple> edges;
    for (int k = 1; k <= i; ++k) edges.push_back({nodes[0], nodes[k]});
    inst.q2 = Query::make(graph_schema(), {{kEdge, std::move(edges)}}, {});

    inst.num_vars = 3 * (i + 1);
    inst.penalty_weight = 2 * i + 1;
    inst.d = -i;
    // Central node to a chain node with an outgoing edge, all spokes to its
    // successor: 100 (010)^i and 010 (001)^i.
    std::vector<std::uint8_t> h(inst.num_vars, 0), h2(inst.num_vars, 0);
    h[0] = 1;
    h2[1] = 1;
    for (int k = 1; k <= i; ++k) {
        h[3 * k + 1] = 1;
        h2[3 * k + 2] = 1;
    }
    inst.ground_truth = {std::move(h), std::move(h2)};
    return inst;
}

FamilyInstance gen_family(Family f, int i) {
    return f == Family::CycleChain ? gen_cycle_chain(i) : gen_chain_star(i);
}

namespace {

long long ipow(long long base, int exp) {
    long long out = 1;
    for (int k = 0; k < exp; ++k) out *= base;
    return out;
}

/// Q_k = (1+sqrt2)^k + (1-sqrt2)^k, integer via Q_k = 2 Q_{k-1} + Q_{k-2}.
long long pell_companion(int k) {
    long long a = 2, b = 2;  // Q_0, Q_1
    if (k == 0) return a;
    for (int step = 2; step <= k; ++step) {
        const long long next = 2 * b + a;
        a = b;
        b = next;
    }
    return b;
}

}  // namespace

FamilyFractions closed_form_fractions(Family f, int i) {
    if (i < 1) throw std::invalid_argument("family parameter i must be >= 1");
    FamilyFractions out;
    if (f == Family::CycleChain) {
        // rows of width 2: pos unless every row has at most one 1
        out.p_pos = Rational(ipow(4, i + 1) - ipow(3, i + 1), ipow(4, i + 1));
        // words over {0,L,R} of length i+1 containing LR or RL, over 2*3^(i+1)
        const long long denom = 2 * ipow(3, i + 1);
        const long long numer = denom - pell_companion(i + 2);
        out.p_neg_given_notpos = Rational(numer, denom);
        out.p_zero_given_notpos = Rational(1) - out.p_neg_given_notpos;
        out.p_neg_given_notpos_by_pow =
            (2.0 * std::pow(3.0, i + 1) - std::pow(1.0 + std::sqrt(2.0), i + 2) -
             std::pow(1.0 - std::sqrt(2.0), i + 2)) /
            (2.0 * std::pow(3.0, i + 1));
    } else {
        out.p_pos = Rational(ipow(2, i + 1) - 1, ipow(2, i + 1));
        out.p_zero_given_notpos = Rational(ipow(4, i) + ipow(3, i), 2 * ipow(4, i));
        out.p_neg_given_notpos = Rational(ipow(4, i) - ipow(3, i), 2 * ipow(4, i));
        out.p_neg_given_notpos_by_pow =
            boost::rational_cast<double>(out.p_neg_given_notpos);
    }
    return out;
}

double escape_probability(double gap, double time_fraction, double beta_start,
                          double beta_end, long long steps) {
    if (time_fraction < 0.0 || time_fraction > 1.0)
        throw std::invalid_argument("time_fraction must be within [0, 1]");
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    const double alpha = std::pow(beta_end / beta_start, 1.0 / static_cast<double>(steps));
    const double k = std::round(time_fraction * static_cast<double>(steps));
    const double beta = beta_start * std::pow(alpha, k);
    return 1.0 - std::exp(-beta * gap);
}

}  // namespace cqc
