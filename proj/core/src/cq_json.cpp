#include <json.hpp>

#include "cqc/cq.hpp"

namespace cqc {

namespace {

using nlohmann::json;

Tuple tuple_from_json(const json& arr) {
    Tuple t;
    t.reserve(arr.size());
    for (const auto& entry : arr) {
        if (!entry.is_string()) throw Error("tuple entries must be strings");
        t.push_back(term_from_string(entry.get<std::string>()));
    }
    return t;
}

std::map<std::string, std::vector<Tuple>> tableau_from_json(const json& obj,
                                                            const Schema& schema) {
    std::map<std::string, std::vector<Tuple>> tableau;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!schema.relations.count(it.key()))
            throw Error("tableau mentions unknown relation: " + it.key());
        std::vector<Tuple> tuples;
        for (const auto& row : it.value()) tuples.push_back(tuple_from_json(row));
        tableau[it.key()] = std::move(tuples);
    }
    return tableau;
}

Query query_from_json(const json& obj, const Schema& schema) {
    auto tableau = tableau_from_json(obj.at("tableau"), schema);
    Tuple answer = tuple_from_json(obj.at("answer"));
    return Query::make(schema, std::move(tableau), std::move(answer));
}

json tuple_to_json(const Tuple& t) {
    json arr = json::array();
    for (const Term& term : t) arr.push_back(to_string(term));
    return arr;
}

json query_to_json(const Query& q) {
    json tableau = json::object();
    for (const auto& [name, tuples] : q.tableau) {
        json rows = json::array();
        for (const Tuple& t : tuples) rows.push_back(tuple_to_json(t));
        tableau[name] = rows;
    }
    return json{{"tableau", tableau}, {"answer", tuple_to_json(q.answer)}};
}

}  // namespace

PairFile parse_pair_file(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    try {
        Schema schema;
        for (auto it = j.at("schema").begin(); it != j.at("schema").end(); ++it)
            schema.relations[it.key()] = it.value().get<int>();
        PairFile pf{query_from_json(j.at("q1"), schema), query_from_json(j.at("q2"), schema),
                    std::nullopt, std::nullopt};
        if (j.contains("label")) pf.label = j.at("label").get<std::string>();
        if (j.contains("family"))
            pf.family = std::make_pair(j.at("family").at("name").get<std::string>(),
                                       j.at("family").at("i").get<int>());
        return pf;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed query pair file: ") + e.what());
    }
}

std::pair<Query, Query> parse_query_pair(std::string_view text) {
    PairFile pf = parse_pair_file(text);
    return {std::move(pf.q1), std::move(pf.q2)};
}

std::string pair_file_to_json(const PairFile& pf) {
    json schema = json::object();
    for (const auto& [name, arity] : pf.q1.schema.relations) schema[name] = arity;
    json j{{"schema", schema}, {"q1", query_to_json(pf.q1)}, {"q2", query_to_json(pf.q2)}};
    if (pf.label) j["label"] = *pf.label;
    if (pf.family) j["family"] = {{"name", pf.family->first}, {"i", pf.family->second}};
    return j.dump(2);
}

DatabaseInstance parse_database(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    try {
        Schema schema;
        for (auto it = j.at("schema").begin(); it != j.at("schema").end(); ++it)
            schema.relations[it.key()] = it.value().get<int>();
        std::map<std::string, std::vector<Tuple>> relations;
        for (auto it = j.at("relations").begin(); it != j.at("relations").end(); ++it) {
            std::vector<Tuple> tuples;
            for (const auto& row : it.value()) tuples.push_back(tuple_from_json(row));
            relations[it.key()] = std::move(tuples);
        }
        return DatabaseInstance::make(std::move(schema), std::move(relations));
    } catch (const json::exception& e) {
        throw Error(std::string("malformed database file: ") + e.what());
    }
}

}  // namespace cqc
