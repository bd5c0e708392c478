#pragma once

// Internal flattened polynomial representation for solver hot loops.

#include <cstdint>
#include <vector>

#include "cqc/poly.hpp"

namespace cqc::detail {

struct CompiledPoly {
    int num_vars = 0;
    std::vector<long long> coefs;
    std::vector<std::uint32_t> var_offsets;  // coefs.size()+1 entries into var_pool
    std::vector<VarId> var_pool;
    std::vector<std::vector<std::uint32_t>> incidence;  // var -> monomial indices

    explicit CompiledPoly(const BinaryPolynomial& p) {
        num_vars = p.num_vars();
        incidence.resize(num_vars);
        var_offsets.push_back(0);
        for (const auto& [vars, coef] : p.terms()) {
            const std::uint32_t m = static_cast<std::uint32_t>(coefs.size());
            coefs.push_back(coef);
            for (VarId v : vars) {
                var_pool.push_back(v);
                incidence[v].push_back(m);
            }
            var_offsets.push_back(static_cast<std::uint32_t>(var_pool.size()));
        }
    }

    long long evaluate(const std::vector<std::uint8_t>& x) const {
        long long total = 0;
        for (std::size_t m = 0; m < coefs.size(); ++m) {
            bool active = true;
            for (std::uint32_t k = var_offsets[m]; k < var_offsets[m + 1]; ++k) {
                if (!x[var_pool[k]]) {
                    active = false;
                    break;
                }
            }
            if (active) total += coefs[m];
        }
        return total;
    }

    /// Energy change if bit v flips in x (x unchanged).
    long long flip_delta(const std::vector<std::uint8_t>& x, VarId v) const {
        long long sum = 0;
        for (std::uint32_t m : incidence[v]) {
            bool others = true;
            for (std::uint32_t k = var_offsets[m]; k < var_offsets[m + 1]; ++k) {
                const VarId w = var_pool[k];
                if (w != v && !x[w]) {
                    others = false;
                    break;
                }
            }
            if (others) sum += coefs[m];
        }
        return x[v] ? -sum : sum;
    }
};

/// Bitvector from an enumeration code; variable 0 occupies the most
/// significant bit so that ascending codes give lexicographically ascending
/// bitvectors.
inline std::vector<std::uint8_t> bits_from_code(std::uint64_t code, int n) {
    std::vector<std::uint8_t> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = (code >> (n - 1 - i)) & 1;
    return bits;
}

inline std::uint64_t code_from_bits(const std::vector<std::uint8_t>& bits) {
    std::uint64_t code = 0;
    for (std::uint8_t b : bits) code = (code << 1) | b;
    return code;
}

}  // namespace cqc::detail
