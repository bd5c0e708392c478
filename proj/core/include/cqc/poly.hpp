#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cqc/errors.hpp"

namespace cqc {

using VarId = std::uint32_t;
using Rational = boost::rational<std::int64_t>;

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

struct Monomial {
    long long coef = 0;
    std::vector<VarId> vars;  // strictly increasing; empty = constant term

    bool operator==(const Monomial&) const = default;
};

/// Sparse integer-coefficient multilinear polynomial over binary variables
/// x_0..x_{n-1}. Kept in normal form: at most one monomial per variable set,
/// square-free, no zero coefficients.
class BinaryPolynomial {
public:
    BinaryPolynomial() = default;
    explicit BinaryPolynomial(int num_vars) : num_vars_(num_vars) {}

    int num_vars() const { return num_vars_; }

    /// Adds coef * prod(vars). Repeated variables collapse (x*x = x) and the
    /// monomial merges with an existing one over the same variable set.
    void add_term(long long coef, std::vector<VarId> vars);

    long long evaluate(const std::vector<std::uint8_t>& x) const;

    int degree() const;
    bool is_constant() const;
    long long constant_term() const;

    const std::map<std::vector<VarId>, long long>& terms() const { return terms_; }
    std::vector<Monomial> monomials() const;
    std::size_t monomial_count() const { return terms_.size(); }

    BinaryPolynomial scaled(long long factor) const;

    bool operator==(const BinaryPolynomial&) const = default;

private:
    int num_vars_ = 0;
    std::map<std::vector<VarId>, long long> terms_;
};

/// Sum of two polynomials over the same variable range.
BinaryPolynomial add(const BinaryPolynomial& a, const BinaryPolynomial& b);

std::string poly_to_json(const BinaryPolynomial& p);
BinaryPolynomial poly_from_json(const std::string& text);

/// Upper-triangular QUBO matrix plus constant offset: p(x) = x^T Q x + c0,
/// linear terms on the diagonal.
struct Qubo {
    int num_vars = 0;
    std::map<std::pair<VarId, VarId>, Rational> coeffs;  // keys (i, j) with i <= j
    Rational constant = 0;

    Rational energy(const std::vector<std::uint8_t>& x) const;
};

/// Converts a degree-<=2 polynomial; throws NotQuboError otherwise, naming an
/// offending monomial.
Qubo to_qubo(const BinaryPolynomial& p);

/// Coordinate list (i, j, q_ij) sorted row-major, plus the constant.
std::string qubo_to_json(const Qubo& q);

/// Ising model over spins s_i in {-1,+1} with the convention s_i = 1 - 2 x_i.
/// total_energy(spins(x)) equals the QUBO value x^T Q x + c0 exactly;
/// the raw energy satisfies  sum h_i s_i + sum J_ij s_i s_j = x^T Q x + shift
/// with shift = sum J + sum h.
struct IsingModel {
    int num_vars = 0;
    std::map<VarId, Rational> h;
    std::map<std::pair<VarId, VarId>, Rational> j;  // keys strictly i < j
    Rational offset = 0;                            // c0 - shift

    Rational shift() const;
    Rational raw_energy(const std::vector<int>& spins) const;
    Rational total_energy(const std::vector<int>& spins) const;

    bool operator==(const IsingModel&) const = default;
};

std::vector<int> spins_from_bits(const std::vector<std::uint8_t>& x);
std::vector<std::uint8_t> bits_from_spins(const std::vector<int>& s);

IsingModel qubo_to_ising(const Qubo& q);
Qubo ising_to_qubo(const IsingModel& m);

}  // namespace cqc
