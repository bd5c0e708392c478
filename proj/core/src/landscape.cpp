#include "cqc/landscape.hpp"

#include <json.hpp>

#include "compiled_poly.hpp"

namespace cqc {

long long LandscapeReport::neg_count() const {
    long long total = 0;
    for (const auto& [energy, count] : neg_histogram) total += count;
    return total;
}

long long LandscapeReport::total_states() const {
    return pos_count + zero_count + neg_count();
}

LandscapeReport enumerate_landscape(const ProblemInstance& inst, int cap_bits) {
    if (inst.constrained())
        throw std::invalid_argument("landscape enumeration covers the unconstrained space");
    const int n = inst.p.num_vars();
    if (n > cap_bits)
        throw CapExceededError("landscape cap exceeded: 2^" + std::to_string(n) + " states");

    const detail::CompiledPoly poly(inst.p);
    const std::uint64_t states = std::uint64_t{1} << n;
    std::vector<long long> energy(states);
    for (std::uint64_t z = 0; z < states; ++z)
        energy[z] = poly.evaluate(detail::bits_from_code(z, n));

    LandscapeReport report;
    report.num_vars = n;
    for (std::uint64_t z = 0; z < states; ++z) {
        const long long e = energy[z];
        if (e > 0) {
            ++report.pos_count;
        } else if (e == 0) {
            ++report.zero_count;
        } else {
            ++report.neg_histogram[e];
        }

        bool strict_min = true;
        bool touches_neg = false;
        for (int b = 0; b < n; ++b) {
            const long long neighbor = energy[z ^ (std::uint64_t{1} << b)];
            if (neighbor <= e) strict_min = false;
            if (neighbor < 0) touches_neg = true;
        }
        if (strict_min)
            report.strict_local_minima.emplace_back(detail::bits_from_code(z, n), e);
        if (e == 0 && touches_neg) ++report.zero_adjacent_to_neg;
    }

    const long long total = static_cast<long long>(states);
    const long long notpos = total - report.pos_count;
    report.p_pos = Rational(report.pos_count, total);
    if (notpos > 0) {
        report.p_neg_given_notpos = Rational(report.neg_count(), notpos);
        report.p_zero_given_notpos = Rational(report.zero_count, notpos);
    }
    return report;
}

std::string landscape_to_json(const LandscapeReport& report) {
    nlohmann::json neg = nlohmann::json::object();
    for (const auto& [energy, count] : report.neg_histogram)
        neg[std::to_string(energy)] = count;

    auto fraction = [](const Rational& r) {
        return nlohmann::json{{"fraction", rational_to_string(r)},
                              {"decimal", boost::rational_cast<double>(r)}};
    };
    nlohmann::json minima = nlohmann::json::array();
    for (const auto& [bits, energy] : report.strict_local_minima) {
        std::string s;
        for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
        minima.push_back({{"bits", s}, {"energy", energy}});
    }
    nlohmann::json j{
        {"num_vars", report.num_vars},
        {"counts",
         {{"pos", report.pos_count}, {"zero", report.zero_count}, {"neg", neg}}},
        {"fractions",
         {{"p_pos", fraction(report.p_pos)},
          {"p_neg_given_notpos", fraction(report.p_neg_given_notpos)},
          {"p_zero_given_notpos", fraction(report.p_zero_given_notpos)}}},
        {"strict_local_minima", minima},
        {"zero_adjacent_to_neg", report.zero_adjacent_to_neg},
    };
    return j.dump(2);
}

}  // namespace cqc
