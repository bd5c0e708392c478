#include "cqc/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cqc {

std::string to_string(RejectReason r) {
    switch (r) {
        case RejectReason::AnswerArity: return "answer-arity";
        case RejectReason::AnswerConstantMismatch: return "answer-constant-mismatch";
        case RejectReason::AnswerVariableConflict: return "answer-variable-conflict";
        case RejectReason::EmptyRelation: return "empty-relation";
        case RejectReason::SimplificationNoFit: return "simplification-no-fit";
        case RejectReason::SimplificationConflict: return "simplification-conflict";
    }
    return "?";
}

std::string to_string(Variant v) {
    return v == Variant::Generic ? "generic" : "simplified";
}

std::string EarlyReject::describe() const {
    std::ostringstream out;
    out << to_string(reason);
    if (!relation.empty()) out << " [" << relation << "]";
    if (tuple) {
        out << " (";
        for (std::size_t k = 0; k < tuple->size(); ++k) {
            if (k) out << ",";
            out << cqc::to_string((*tuple)[k]);
        }
        out << ")";
    }
    if (!detail.empty()) out << ": " << detail;
    return out.str();
}

std::optional<int> Layout::column_of(const Term& t) const {
    auto it = std::lower_bound(columns.begin(), columns.end(), t);
    if (it == columns.end() || *it != t) return std::nullopt;
    return static_cast<int>(it - columns.begin());
}

std::optional<int> Layout::row_of(const Term& t) const {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].term == t) return static_cast<int>(i);
    return std::nullopt;
}

int Layout::free_position(int row_index) const {
    auto it = std::lower_bound(free_rows.begin(), free_rows.end(), row_index);
    if (it == free_rows.end() || *it != row_index) return -1;
    return static_cast<int>(it - free_rows.begin());
}

void Layout::rebuild_free_rows() {
    free_rows.clear();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].free) free_rows.push_back(static_cast<int>(i));
}

double ProblemInstance::search_space_size() const {
    if (!groups) return std::ldexp(1.0, p.num_vars());
    double size = 1.0;
    for (const auto& g : *groups) size *= static_cast<double>(g.size());
    return size;
}

PrepareResult prepare(const Query& q1, const Query& q2) {
    const Tuple& v1 = q1.answer;
    const Tuple& v2 = q2.answer;

    // Case 1: answer arities differ.
    if (v2.size() != v1.size())
        return EarlyReject{RejectReason::AnswerArity, "", std::nullopt,
                           "answer arities " + std::to_string(v1.size()) + " vs " +
                               std::to_string(v2.size())};
    // Case 2: a constant in v2 would not map to itself.
    for (std::size_t k = 0; k < v2.size(); ++k)
        if (v2[k].is_constant() && v1[k] != v2[k])
            return EarlyReject{RejectReason::AnswerConstantMismatch, "", std::nullopt,
                               to_string(v2[k]) + " at answer position " + std::to_string(k)};
    // Case 3: a repeated variable in v2 with different images in v1.
    for (std::size_t k = 0; k < v2.size(); ++k)
        for (std::size_t k2 = k + 1; k2 < v2.size(); ++k2)
            if (v2[k].is_variable() && v2[k] == v2[k2] && v1[k] != v1[k2])
                return EarlyReject{RejectReason::AnswerVariableConflict, "", std::nullopt,
                                   to_string(v2[k]) + " maps to both " + to_string(v1[k]) +
                                       " and " + to_string(v1[k2])};
    // Case 4: a non-empty q2 relation that is empty in q1.
    for (const auto& [name, tuples] : q2.tableau)
        if (!tuples.empty() && q1.tuples(name).empty())
            return EarlyReject{RejectReason::EmptyRelation, name, std::nullopt,
                               "T2(" + name + ") is non-empty but T1(" + name + ") is empty"};

    Layout layout;
    layout.columns = q1.universe();

    // Rows fixed by the preparation step: constants map to their own column
    // (all-zero row when absent from A1), answer variables to their forced
    // image.
    std::map<Term, int> forced_answer_column;
    for (std::size_t k = 0; k < v2.size(); ++k) {
        if (!v2[k].is_variable()) continue;
        const auto col = layout.column_of(v1[k]);
        // v1 terms always occur in A1 (answer variables occur in the tableau).
        forced_answer_column.emplace(v2[k], col.value());
    }

    for (const Term& element : q2.universe()) {
        LayoutRow row;
        row.term = element;
        if (element.is_constant()) {
            row.free = false;
            row.fixed_bits.assign(layout.columns.size(), 0);
            if (auto col = layout.column_of(element)) row.fixed_bits[*col] = 1;
        } else if (auto it = forced_answer_column.find(element);
                   it != forced_answer_column.end()) {
            row.free = false;
            row.fixed_bits.assign(layout.columns.size(), 0);
            row.fixed_bits[it->second] = 1;
        }
        layout.rows.push_back(std::move(row));
    }
    layout.rebuild_free_rows();
    return layout;
}

BinaryPolynomial build_p_unique(const Layout& layout) {
    BinaryPolynomial p(layout.num_vars());
    const int n1 = layout.num_columns();
    for (int k = 0; k < layout.num_free_rows(); ++k)
        for (int j = 0; j < n1; ++j)
            for (int j2 = j + 1; j2 < n1; ++j2)
                p.add_term(1, {layout.var_id(k, j), layout.var_id(k, j2)});
    return p;
}

BinaryPolynomial build_p_ac(const Layout& layout, const Query& q1, const Query& q2) {
    BinaryPolynomial p(layout.num_vars());
    std::map<Term, int> row_index;
    for (std::size_t i = 0; i < layout.rows.size(); ++i)
        row_index.emplace(layout.rows[i].term, static_cast<int>(i));

    for (const auto& [relation, u_tuples] : q2.tableau) {
        const std::vector<Tuple>& w_tuples = q1.tuples(relation);
        for (const Tuple& u : u_tuples) {
            for (const Tuple& w : w_tuples) {
                bool dropped = false;
                std::vector<VarId> vars;
                for (std::size_t k = 0; k < u.size() && !dropped; ++k) {
                    const LayoutRow& row = layout.rows[row_index.at(u[k])];
                    const int col = layout.column_of(w[k]).value();
                    if (row.free) {
                        const int pos = layout.free_position(row_index.at(u[k]));
                        vars.push_back(layout.var_id(pos, col));
                    } else if (!row.fixed_bits[col]) {
                        dropped = true;  // product contains a fixed 0
                    }
                    // a fixed 1 is elided from the monomial
                }
                if (!dropped) p.add_term(-1, std::move(vars));
            }
        }
    }
    return p;
}

long long penalty_weight(const Query& q1, const Query& q2, PenaltyRule rule) {
    if (rule == PenaltyRule::TableauProduct)
        return q1.tableau_size() * q2.tableau_size() + 1;
    long long total = 0;
    for (const auto& [name, tuples] : q1.tableau)
        total += static_cast<long long>(tuples.size()) *
                 static_cast<long long>(q2.tuples(name).size());
    return total + 1;
}

namespace {

ProblemInstance assemble(Layout layout, const Query& q1, const Query& q2,
                         PenaltyRule rule, Variant variant) {
    ProblemInstance inst;
    inst.layout = std::move(layout);
    inst.variant = variant;
    inst.penalty_weight = penalty_weight(q1, q2, rule);
    inst.ac_part = build_p_ac(inst.layout, q1, q2);
    inst.p = add(inst.ac_part, build_p_unique(inst.layout).scaled(inst.penalty_weight));
    inst.d = -q2.tableau_size();
    return inst;
}

}  // namespace

InstanceResult build_generic(const Query& q1, const Query& q2, PenaltyRule rule) {
    PrepareResult prepared = prepare(q1, q2);
    if (auto* reject = std::get_if<EarlyReject>(&prepared)) return *reject;
    return assemble(std::get<Layout>(std::move(prepared)), q1, q2, rule, Variant::Generic);
}

PrepareResult simplify(const Layout& layout, const Query& q1, const Query& q2,
                       bool fixpoint) {
    Layout current = layout;
    std::map<Term, int> row_index;
    for (std::size_t i = 0; i < current.rows.size(); ++i)
        row_index.emplace(current.rows[i].term, static_cast<int>(i));

    bool changed = true;
    while (changed) {
        changed = false;
        // Zero-contribution tests run against this snapshot; fixes made during
        // the pass only participate in the conflict checks.
        const Layout snapshot = current;

        for (const auto& [relation, u_tuples] : q2.tableau) {
            const std::vector<Tuple>& w_tuples = q1.tuples(relation);
            for (const Tuple& u : u_tuples) {
                const Tuple* fitting = nullptr;
                int fitting_count = 0;
                for (const Tuple& w : w_tuples) {
                    bool zero = false;
                    for (std::size_t k = 0; k < u.size(); ++k) {
                        const LayoutRow& row = snapshot.rows[row_index.at(u[k])];
                        if (row.free) continue;  // a free variable never forces a zero
                        const int col = snapshot.column_of(w[k]).value();
                        if (!row.fixed_bits[col]) {
                            zero = true;
                            break;
                        }
                    }
                    if (!zero) {
                        fitting = &w;
                        if (++fitting_count > 1) break;
                    }
                }
                if (fitting_count == 0)
                    return EarlyReject{RejectReason::SimplificationNoFit, relation, u,
                                       "no tuple of T1(" + relation + ") fits"};
                if (fitting_count > 1) continue;

                const Tuple& w = *fitting;
                // Conflict (i): a repeated u-position demands two images.
                for (std::size_t k = 0; k < u.size(); ++k)
                    for (std::size_t k2 = k + 1; k2 < u.size(); ++k2)
                        if (u[k] == u[k2] && w[k] != w[k2])
                            return EarlyReject{RejectReason::SimplificationConflict, relation,
                                               u,
                                               to_string(u[k]) + " would map to both " +
                                                   to_string(w[k]) + " and " + to_string(w[k2])};
                // Conflict (ii): an already-fixed row demands a different column.
                for (std::size_t k = 0; k < u.size(); ++k) {
                    const LayoutRow& row = current.rows[row_index.at(u[k])];
                    if (row.free) continue;
                    const int col = current.column_of(w[k]).value();
                    if (!row.fixed_bits[col])
                        return EarlyReject{RejectReason::SimplificationConflict, relation, u,
                                           to_string(u[k]) + " is already fixed away from " +
                                               to_string(w[k])};
                }
                for (std::size_t k = 0; k < u.size(); ++k) {
                    LayoutRow& row = current.rows[row_index.at(u[k])];
                    if (!row.free) continue;
                    row.free = false;
                    row.fixed_bits.assign(current.columns.size(), 0);
                    row.fixed_bits[current.column_of(w[k]).value()] = 1;
                    changed = true;
                }
            }
        }
        if (!fixpoint) break;
    }
    current.rebuild_free_rows();
    return current;
}

InstanceResult build_simplified(const Query& q1, const Query& q2, PenaltyRule rule,
                                bool fixpoint) {
    PrepareResult prepared = prepare(q1, q2);
    if (auto* reject = std::get_if<EarlyReject>(&prepared)) return *reject;
    PrepareResult simplified = simplify(std::get<Layout>(prepared), q1, q2, fixpoint);
    if (auto* reject = std::get_if<EarlyReject>(&simplified)) return *reject;
    return assemble(std::get<Layout>(std::move(simplified)), q1, q2, rule,
                    Variant::Simplified);
}

ProblemInstance apply_constraints(ProblemInstance inst) {
    if (inst.constrained()) throw std::invalid_argument("instance is already constrained");
    inst.p = inst.ac_part;
    std::vector<std::vector<VarId>> groups;
    groups.reserve(inst.layout.num_free_rows());
    for (int k = 0; k < inst.layout.num_free_rows(); ++k) {
        std::vector<VarId> group;
        group.reserve(inst.layout.num_columns());
        for (int j = 0; j < inst.layout.num_columns(); ++j)
            group.push_back(inst.layout.var_id(k, j));
        groups.push_back(std::move(group));
    }
    inst.groups = std::move(groups);
    return inst;
}

std::optional<TrivialOutcome> detect_trivial(const ProblemInstance& inst) {
    if (!inst.p.is_constant()) return std::nullopt;
    TrivialOutcome out;
    out.value = inst.p.constant_term();
    out.contained = out.value == inst.d;
    if (out.contained) {
        // All rows carrying tableau occurrences are fixed when the constant
        // reaches d; free rows (possible only in the constrained variants) may
        // be completed arbitrarily, so pick the first column.
        std::vector<std::uint8_t> bits(inst.layout.num_vars(), 0);
        for (int k = 0; k < inst.layout.num_free_rows(); ++k)
            if (inst.layout.num_columns() > 0) bits[inst.layout.var_id(k, 0)] = 1;
        out.witness = extract_witness(bits, inst.layout);
    }
    return out;
}

Mapping extract_witness(const std::vector<std::uint8_t>& x, const Layout& layout) {
    if (static_cast<int>(x.size()) != layout.num_vars())
        throw std::invalid_argument("assignment length does not match layout");
    Mapping h;
    for (std::size_t i = 0; i < layout.rows.size(); ++i) {
        const LayoutRow& row = layout.rows[i];
        int ones = 0;
        int column = -1;
        for (int j = 0; j < layout.num_columns(); ++j) {
            const std::uint8_t bit =
                row.free ? x[layout.var_id(layout.free_position(static_cast<int>(i)), j)]
                         : row.fixed_bits[j];
            if (bit) {
                ++ones;
                column = j;
            }
        }
        if (ones != 1)
            throw WitnessError("row " + to_string(row.term) + " has " +
                               std::to_string(ones) + " ones; not a function");
        h.assignments.emplace(row.term, layout.columns[column]);
    }
    return h;
}

std::string instance_to_json(const ProblemInstance& inst) {
    nlohmann::json monomials = nlohmann::json::array();
    for (const auto& [vars, coef] : inst.p.terms())
        monomials.push_back({{"coef", coef}, {"vars", vars}});
    nlohmann::json rows = nlohmann::json::array();
    nlohmann::json fixed_rows = nlohmann::json::object();
    for (const LayoutRow& row : inst.layout.rows) {
        rows.push_back(to_string(row.term));
        if (!row.free) fixed_rows[to_string(row.term)] = row.fixed_bits;
    }
    nlohmann::json columns = nlohmann::json::array();
    for (const Term& c : inst.layout.columns) columns.push_back(to_string(c));

    nlohmann::json j{
        {"num_vars", inst.p.num_vars()},
        {"monomials", monomials},
        {"d", inst.d},
        {"constraint", inst.constrained() ? "one-hot-per-row" : "unconstrained"},
        {"variant", to_string(inst.variant)},
        {"penalty_weight", inst.penalty_weight},
        {"layout", {{"rows", rows}, {"fixed_rows", fixed_rows}, {"columns", columns}}},
    };
    if (inst.groups) j["groups"] = *inst.groups;
    return j.dump(2);
}

ProblemInstance instance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ProblemInstance inst;
    inst.p = BinaryPolynomial(j.at("num_vars").get<int>());
    for (const auto& m : j.at("monomials"))
        inst.p.add_term(m.at("coef").get<long long>(), m.at("vars").get<std::vector<VarId>>());
    inst.d = j.at("d").get<long long>();
    inst.variant =
        j.at("variant").get<std::string>() == "generic" ? Variant::Generic : Variant::Simplified;
    inst.penalty_weight = j.value("penalty_weight", 0LL);
    const auto& layout = j.at("layout");
    for (const auto& c : layout.at("columns"))
        inst.layout.columns.push_back(term_from_string(c.get<std::string>()));
    const auto& fixed_rows = layout.at("fixed_rows");
    for (const auto& r : layout.at("rows")) {
        LayoutRow row;
        const std::string name = r.get<std::string>();
        row.term = term_from_string(name);
        if (fixed_rows.contains(name)) {
            row.free = false;
            row.fixed_bits = fixed_rows.at(name).get<std::vector<std::uint8_t>>();
        }
        inst.layout.rows.push_back(std::move(row));
    }
    inst.layout.rebuild_free_rows();
    if (j.contains("groups"))
        inst.groups = j.at("groups").get<std::vector<std::vector<VarId>>>();
    if (inst.constrained())
        inst.ac_part = inst.p;
    else
        inst.ac_part = add(inst.p, build_p_unique(inst.layout).scaled(-inst.penalty_weight));
    return inst;
}

}  // namespace cqc
