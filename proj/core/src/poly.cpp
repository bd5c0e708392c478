#include "cqc/poly.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace cqc {

std::string rational_to_string(const Rational& r) {
    std::ostringstream out;
    out << r.numerator();
    if (r.denominator() != 1) out << "/" << r.denominator();
    return out.str();
}

Rational rational_from_string(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

void BinaryPolynomial::add_term(long long coef, std::vector<VarId> vars) {
    if (coef == 0) return;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());  // x*x = x
    for (VarId v : vars)
        if (static_cast<int>(v) >= num_vars_)
            throw std::invalid_argument("variable id out of range");
    auto [it, inserted] = terms_.emplace(std::move(vars), coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0) terms_.erase(it);
    }
}

long long BinaryPolynomial::evaluate(const std::vector<std::uint8_t>& x) const {
    if (static_cast<int>(x.size()) != num_vars_)
        throw std::invalid_argument("assignment length does not match num_vars");
    long long total = 0;
    for (const auto& [vars, coef] : terms_) {
        bool active = true;
        for (VarId v : vars) {
            if (!x[v]) {
                active = false;
                break;
            }
        }
        if (active) total += coef;
    }
    return total;
}

int BinaryPolynomial::degree() const {
    std::size_t deg = 0;
    for (const auto& [vars, coef] : terms_) deg = std::max(deg, vars.size());
    return static_cast<int>(deg);
}

bool BinaryPolynomial::is_constant() const { return degree() == 0; }

long long BinaryPolynomial::constant_term() const {
    auto it = terms_.find({});
    return it == terms_.end() ? 0 : it->second;
}

std::vector<Monomial> BinaryPolynomial::monomials() const {
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& [vars, coef] : terms_) out.push_back({coef, vars});
    return out;
}

BinaryPolynomial BinaryPolynomial::scaled(long long factor) const {
    BinaryPolynomial out(num_vars_);
    if (factor == 0) return out;
    for (const auto& [vars, coef] : terms_) out.terms_.emplace(vars, coef * factor);
    return out;
}

BinaryPolynomial add(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    if (a.num_vars() != b.num_vars())
        throw std::invalid_argument("polynomials have different num_vars");
    BinaryPolynomial out(a.num_vars());
    for (const auto& [vars, coef] : a.terms()) out.add_term(coef, vars);
    for (const auto& [vars, coef] : b.terms()) out.add_term(coef, vars);
    return out;
}

std::string poly_to_json(const BinaryPolynomial& p) {
    nlohmann::json monomials = nlohmann::json::array();
    for (const auto& [vars, coef] : p.terms())
        monomials.push_back({{"coef", coef}, {"vars", vars}});
    nlohmann::json j{{"num_vars", p.num_vars()}, {"monomials", monomials}};
    return j.dump();
}

BinaryPolynomial poly_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    BinaryPolynomial p(j.at("num_vars").get<int>());
    for (const auto& m : j.at("monomials"))
        p.add_term(m.at("coef").get<long long>(), m.at("vars").get<std::vector<VarId>>());
    return p;
}

Rational Qubo::energy(const std::vector<std::uint8_t>& x) const {
    if (static_cast<int>(x.size()) != num_vars)
        throw std::invalid_argument("assignment length does not match num_vars");
    Rational total = constant;
    for (const auto& [key, q] : coeffs)
        if (x[key.first] && x[key.second]) total += q;
    return total;
}

Qubo to_qubo(const BinaryPolynomial& p) {
    Qubo q;
    q.num_vars = p.num_vars();
    for (const auto& [vars, coef] : p.terms()) {
        if (vars.empty()) {
            q.constant = Rational(coef);
        } else if (vars.size() == 1) {
            q.coeffs[{vars[0], vars[0]}] += Rational(coef);  // x_i = x_i^2
        } else if (vars.size() == 2) {
            q.coeffs[{vars[0], vars[1]}] += Rational(coef);
        } else {
            std::ostringstream msg;
            msg << "not QUBO: monomial of degree " << vars.size() << " (" << coef;
            for (VarId v : vars) msg << "*x" << v;
            msg << ")";
            throw NotQuboError(msg.str());
        }
    }
    return q;
}

std::string qubo_to_json(const Qubo& q) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, value] : q.coeffs)
        entries.push_back({key.first, key.second, rational_to_string(value)});
    nlohmann::json j{{"num_vars", q.num_vars},
                     {"entries", entries},
                     {"constant", rational_to_string(q.constant)}};
    return j.dump();
}

Rational IsingModel::shift() const {
    Rational total = 0;
    for (const auto& [i, hi] : h) total += hi;
    for (const auto& [key, jij] : j) total += jij;
    return total;
}

Rational IsingModel::raw_energy(const std::vector<int>& spins) const {
    if (static_cast<int>(spins.size()) != num_vars)
        throw std::invalid_argument("spin vector length does not match num_vars");
    Rational total = 0;
    for (const auto& [i, hi] : h) total += hi * spins[i];
    for (const auto& [key, jij] : j) total += jij * (spins[key.first] * spins[key.second]);
    return total;
}

Rational IsingModel::total_energy(const std::vector<int>& spins) const {
    return raw_energy(spins) + offset;
}

std::vector<int> spins_from_bits(const std::vector<std::uint8_t>& x) {
    std::vector<int> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = 1 - 2 * static_cast<int>(x[i]);
    return s;
}

std::vector<std::uint8_t> bits_from_spins(const std::vector<int>& s) {
    std::vector<std::uint8_t> x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i] == 1 ? 0 : 1;
    return x;
}

IsingModel qubo_to_ising(const Qubo& q) {
    IsingModel m;
    m.num_vars = q.num_vars;
    for (const auto& [key, value] : q.coeffs) {
        if (value == Rational(0)) continue;
        if (key.first < key.second) m.j[key] = value / 4;
    }
    for (VarId i = 0; i < static_cast<VarId>(q.num_vars); ++i) {
        Rational qii = 0;
        if (auto it = q.coeffs.find({i, i}); it != q.coeffs.end()) qii = it->second;
        Rational coupler_sum = 0;
        for (const auto& [key, jij] : m.j) {
            if (key.second == i || key.first == i) coupler_sum += jij;
        }
        const Rational hi = -(qii + 2 * coupler_sum) / 2;
        if (hi != Rational(0)) m.h[i] = hi;
    }
    m.offset = q.constant - m.shift();
    return m;
}

Qubo ising_to_qubo(const IsingModel& m) {
    Qubo q;
    q.num_vars = m.num_vars;
    for (const auto& [key, jij] : m.j)
        if (jij != Rational(0)) q.coeffs[key] = 4 * jij;
    for (VarId i = 0; i < static_cast<VarId>(m.num_vars); ++i) {
        Rational hi = 0;
        if (auto it = m.h.find(i); it != m.h.end()) hi = it->second;
        Rational coupler_sum = 0;
        for (const auto& [key, jij] : m.j)
            if (key.first == i || key.second == i) coupler_sum += jij;
        const Rational qii = -2 * hi - 2 * coupler_sum;
        if (qii != Rational(0)) q.coeffs[{i, i}] = qii;
    }
    q.constant = m.offset + m.shift();
    return q;
}

}  // namespace cqc
