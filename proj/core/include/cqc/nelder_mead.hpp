#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace cqc {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool improved = false;  // best value beat the best initial-simplex vertex
};

/// Downhill simplex search with the standard coefficients (reflection 1,
/// expansion 2, contraction 0.5, shrink 0.5). `max_evaluations` bounds the
/// total number of objective calls, including the initial simplex.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<std::vector<double>> simplex,
                                    int max_evaluations) {
    const std::size_t dim = simplex.empty() ? 0 : simplex.front().size();
    NelderMeadResult result;
    if (dim == 0 || simplex.size() != dim + 1) {
        result.x = simplex.empty() ? std::vector<double>{} : simplex.front();
        if (max_evaluations > 0 && !simplex.empty()) {
            result.value = f(result.x);
            result.evaluations = 1;
        }
        return result;
    }

    std::vector<double> values(simplex.size());
    int evals = 0;
    for (std::size_t i = 0; i < simplex.size() && evals < max_evaluations; ++i) {
        values[i] = f(simplex[i]);
        ++evals;
    }
    // If the budget could not even cover the initial simplex, fall back to the
    // evaluated prefix.
    const std::size_t evaluated = static_cast<std::size_t>(evals);
    auto best_of = [&](std::size_t count) {
        std::size_t b = 0;
        for (std::size_t i = 1; i < count; ++i)
            if (values[i] < values[b]) b = i;
        return b;
    };
    if (evaluated < simplex.size()) {
        const std::size_t b = best_of(std::max<std::size_t>(evaluated, 1));
        return {simplex[b], evaluated ? values[b] : 0.0, evals, false};
    }
    const double initial_best = values[best_of(values.size())];

    auto order = [&]() {
        std::vector<std::size_t> idx(simplex.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s2(simplex.size());
        std::vector<double> v2(values.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            s2[k] = simplex[idx[k]];
            v2[k] = values[idx[k]];
        }
        simplex.swap(s2);
        values.swap(v2);
    };

    while (evals < max_evaluations) {
        order();
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k];
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto point_at = [&](double t) {
            std::vector<double> p(dim);
            for (std::size_t k = 0; k < dim; ++k)
                p[k] = centroid[k] + t * (simplex.back()[k] - centroid[k]);
            return p;
        };

        const std::vector<double> reflected = point_at(-1.0);
        const double fr = f(reflected);
        ++evals;
        if (fr < values.front()) {
            if (evals < max_evaluations) {
                const std::vector<double> expanded = point_at(-2.0);
                const double fe = f(expanded);
                ++evals;
                if (fe < fr) {
                    simplex.back() = expanded;
                    values.back() = fe;
                    continue;
                }
            }
            simplex.back() = reflected;
            values.back() = fr;
            continue;
        }
        if (fr < values[values.size() - 2]) {
            simplex.back() = reflected;
            values.back() = fr;
            continue;
        }
        if (evals >= max_evaluations) break;
        const std::vector<double> contracted = point_at(fr < values.back() ? -0.5 : 0.5);
        const double fc = f(contracted);
        ++evals;
        if (fc < std::min(fr, values.back())) {
            simplex.back() = contracted;
            values.back() = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for (std::size_t i = 1; i < simplex.size() && evals < max_evaluations; ++i) {
            for (std::size_t k = 0; k < dim; ++k)
                simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
            values[i] = f(simplex[i]);
            ++evals;
        }
    }
    order();
    result.x = simplex.front();
    result.value = values.front();
    result.evaluations = evals;
    result.improved = values.front() < initial_best;
    return result;
}

}  // namespace cqc
