#include "cqc/cq.hpp"

#include <algorithm>
#include <functional>

namespace cqc {

std::string to_string(const Term& t) {
    if (t.is_variable()) return "?" + t.text;
    return t.text;
}

Term term_from_string(std::string_view s) {
    if (!s.empty() && s.front() == '?') return Term::variable(std::string(s.substr(1)));
    return Term::constant(std::string(s));
}

int Schema::arity(const std::string& relation) const {
    auto it = relations.find(relation);
    if (it == relations.end()) throw Error("unknown relation: " + relation);
    return it->second;
}

namespace {

void sort_dedup(std::vector<Tuple>& tuples) {
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
}

}  // namespace

Query Query::make(Schema schema, std::map<std::string, std::vector<Tuple>> tableau,
                  Tuple answer) {
    Query q;
    q.schema = std::move(schema);
    q.answer = std::move(answer);
    for (auto& [name, arity] : q.schema.relations) {
        if (arity < 0) throw Error("negative arity for relation " + name);
        q.tableau[name] = {};
    }
    for (auto& [name, tuples] : tableau) {
        const int arity = q.schema.arity(name);
        for (const Tuple& t : tuples) {
            if (static_cast<int>(t.size()) != arity)
                throw Error("arity mismatch in relation " + name + ": tuple has " +
                            std::to_string(t.size()) + " terms, arity is " +
                            std::to_string(arity));
        }
        q.tableau[name] = std::move(tuples);
        sort_dedup(q.tableau[name]);
    }
    const std::set<Term> vars = q.variables();
    for (const Term& t : q.answer) {
        if (t.is_variable() && !vars.count(t))
            throw Error("answer variable " + to_string(t) + " does not occur in the tableau");
    }
    return q;
}

const std::vector<Tuple>& Query::tuples(const std::string& relation) const {
    auto it = tableau.find(relation);
    if (it == tableau.end()) throw Error("unknown relation: " + relation);
    return it->second;
}

long long Query::tableau_size() const {
    long long n = 0;
    for (const auto& [name, tuples] : tableau) n += static_cast<long long>(tuples.size());
    return n;
}

std::set<Term> Query::variables() const {
    std::set<Term> vars;
    for (const auto& [name, tuples] : tableau)
        for (const Tuple& t : tuples)
            for (const Term& term : t)
                if (term.is_variable()) vars.insert(term);
    return vars;
}

std::set<Term> Query::active_domain() const {
    std::set<Term> consts;
    for (const auto& [name, tuples] : tableau)
        for (const Tuple& t : tuples)
            for (const Term& term : t)
                if (term.is_constant()) consts.insert(term);
    for (const Term& term : answer)
        if (term.is_constant()) consts.insert(term);
    return consts;
}

std::vector<Term> Query::universe() const {
    std::vector<Term> out;
    for (const Term& t : variables()) out.push_back(t);
    for (const Term& t : active_domain()) out.push_back(t);
    std::sort(out.begin(), out.end());  // variables order before constants
    return out;
}

DatabaseInstance DatabaseInstance::make(Schema schema,
                                        std::map<std::string, std::vector<Tuple>> relations) {
    DatabaseInstance db;
    db.schema = std::move(schema);
    for (auto& [name, arity] : db.schema.relations) db.relations[name] = {};
    for (auto& [name, tuples] : relations) {
        const int arity = db.schema.arity(name);
        for (const Tuple& t : tuples) {
            if (static_cast<int>(t.size()) != arity)
                throw Error("arity mismatch in database relation " + name);
            for (const Term& term : t)
                if (!term.is_constant())
                    throw Error("database tuple contains a variable in relation " + name);
        }
        db.relations[name] = std::move(tuples);
        sort_dedup(db.relations[name]);
    }
    return db;
}

const std::vector<Tuple>& DatabaseInstance::tuples(const std::string& relation) const {
    auto it = relations.find(relation);
    if (it == relations.end()) throw Error("unknown relation: " + relation);
    return it->second;
}

const Term& Mapping::image(const Term& t) const {
    auto it = assignments.find(t);
    if (it == assignments.end())
        throw std::invalid_argument("mapping is not total: missing " + to_string(t));
    return it->second;
}

bool is_homomorphism(const Mapping& h, const Query& q2, const Query& q1) {
    for (const Term& c : q2.active_domain())
        if (h.image(c) != c) return false;
    if (q2.answer.size() != q1.answer.size()) return false;
    for (std::size_t k = 0; k < q2.answer.size(); ++k)
        if (h.image(q2.answer[k]) != q1.answer[k]) return false;
    for (const auto& [name, tuples] : q2.tableau) {
        const std::vector<Tuple>& targets = q1.tuples(name);
        for (const Tuple& u : tuples) {
            Tuple image;
            image.reserve(u.size());
            for (const Term& t : u) image.push_back(h.image(t));
            if (!std::binary_search(targets.begin(), targets.end(), image)) return false;
        }
    }
    return true;
}

namespace {

// Backtracking over the sorted elements of A2, trying sorted A1 values in
// order. Pruning only skips candidates that cannot pass is_homomorphism, so
// the first mapping found is the lexicographically first valid one.
struct HomSearch {
    const Query& q2;
    const Query& q1;
    std::vector<Term> domain;   // sorted A2
    std::vector<Term> codomain; // sorted A1
    std::map<Term, Term> assignment;
    std::vector<std::pair<std::string, const Tuple*>> q2_tuples;

    bool tuple_consistent(const Term& just_assigned) const {
        for (const auto& [rel, u] : q2_tuples) {
            bool touches = false;
            bool complete = true;
            for (const Term& t : *u) {
                if (t == just_assigned) touches = true;
                if (!assignment.count(t)) complete = false;
            }
            if (!touches || !complete) continue;
            Tuple image;
            image.reserve(u->size());
            for (const Term& t : *u) image.push_back(assignment.at(t));
            const std::vector<Tuple>& targets = q1.tuples(rel);
            if (!std::binary_search(targets.begin(), targets.end(), image)) return false;
        }
        return true;
    }

    bool extend(std::size_t pos) {
        if (pos == domain.size()) return true;
        const Term& element = domain[pos];
        if (auto it = assignment.find(element); it != assignment.end()) {
            // Forced earlier (constant or answer position): nothing to choose.
            return extend(pos + 1);
        }
        for (const Term& value : codomain) {
            assignment.emplace(element, value);
            if (tuple_consistent(element) && extend(pos + 1)) return true;
            assignment.erase(element);
        }
        return false;
    }
};

}  // namespace

std::optional<Mapping> find_homomorphism(const Query& q2, const Query& q1,
                                         double candidate_cap) {
    HomSearch search{q2, q1, q2.universe(), q1.universe(), {}, {}};

    double candidates = 1.0;
    for (std::size_t i = 0; i < search.domain.size(); ++i) {
        candidates *= static_cast<double>(search.codomain.size());
        if (candidates > candidate_cap)
            throw CapExceededError("oracle overflow: |A1|^|A2| exceeds candidate cap");
    }

    std::set<Term> codomain_set(search.codomain.begin(), search.codomain.end());
    // Condition (1): constants map to themselves. Unrepresentable means no
    // homomorphism exists at all.
    for (const Term& c : q2.active_domain()) {
        if (!codomain_set.count(c)) return std::nullopt;
        search.assignment.emplace(c, c);
    }
    // Condition (2): the answer tuple forces its positions.
    if (q2.answer.size() != q1.answer.size()) return std::nullopt;
    for (std::size_t k = 0; k < q2.answer.size(); ++k) {
        const Term& from = q2.answer[k];
        const Term& to = q1.answer[k];
        if (!codomain_set.count(to)) return std::nullopt;
        auto [it, inserted] = search.assignment.emplace(from, to);
        if (!inserted && it->second != to) return std::nullopt;
    }
    for (const auto& [rel, tuples] : q2.tableau)
        for (const Tuple& u : tuples) search.q2_tuples.emplace_back(rel, &u);

    if (!search.extend(0)) return std::nullopt;
    Mapping h{std::move(search.assignment)};
    if (!is_homomorphism(h, q2, q1)) return std::nullopt;  // catches forced-only corner cases
    return h;
}

std::set<Tuple> evaluate_query(const Query& q, const DatabaseInstance& db) {
    std::set<Term> adom_set;
    for (const auto& [name, tuples] : db.relations)
        for (const Tuple& t : tuples)
            for (const Term& term : t) adom_set.insert(term);
    std::vector<Term> adom(adom_set.begin(), adom_set.end());
    std::vector<Term> vars;
    for (const Term& v : q.variables()) vars.push_back(v);

    std::set<Tuple> result;
    std::map<Term, Term> valuation;
    std::function<void(std::size_t)> enumerate = [&](std::size_t pos) {
        if (pos == vars.size()) {
            for (const auto& [name, tuples] : q.tableau) {
                const std::vector<Tuple>& facts = db.tuples(name);
                for (const Tuple& u : tuples) {
                    Tuple image;
                    image.reserve(u.size());
                    for (const Term& t : u)
                        image.push_back(t.is_constant() ? t : valuation.at(t));
                    if (!std::binary_search(facts.begin(), facts.end(), image)) return;
                }
            }
            Tuple out;
            out.reserve(q.answer.size());
            for (const Term& t : q.answer)
                out.push_back(t.is_constant() ? t : valuation.at(t));
            result.insert(std::move(out));
            return;
        }
        for (const Term& value : adom) {
            valuation[vars[pos]] = value;
            enumerate(pos + 1);
        }
        valuation.erase(vars[pos]);
    };
    if (!vars.empty() && adom.empty()) return result;
    enumerate(0);
    return result;
}

bool decide_containment_oracle(const Query& q1, const Query& q2, double candidate_cap) {
    return find_homomorphism(q2, q1, candidate_cap).has_value();
}

}  // namespace cqc
