#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "panelbreak/errors.hpp"
#include "panelbreak/stats.hpp"

namespace panelbreak {

// System definition shared by the long-run, error-correction, dynamics and
// diagnostic layers. `variables` lists the endogenous series in system
// order; the first one is the normalization target of the long-run
// relation. `dummies` are exogenous 0/1 shift columns already present in
// the dataset. `ordering` is the orthogonalization order (defaults to the
// endogenous order when empty).
struct ModelSpec {
    std::vector<std::string> variables = {"co2", "energy", "gdp", "pop"};
    std::vector<std::string> dummies = {"break2015"};
    int lag_order = 2;       // short-run lags of the differenced system
    int rank = 1;            // number of long-run relations
    stats::Deterministic deterministic = stats::Deterministic::constant;
    std::vector<std::string> ordering;  // empty = same as `variables`

    std::size_t k() const { return variables.size(); }

    std::vector<std::string> effective_ordering() const {
        return ordering.empty() ? variables : ordering;
    }

    // All dataset columns the system touches.
    std::vector<std::string> required_variables() const {
        std::vector<std::string> out = variables;
        out.insert(out.end(), dummies.begin(), dummies.end());
        return out;
    }

    void validate() const {
        if (variables.size() < 2) throw InvalidSpec("system needs at least 2 endogenous variables");
        if (lag_order < 1) throw InvalidSpec("lag order must be at least 1");
        if (rank < 1 || rank >= static_cast<int>(variables.size())) {
            throw InvalidSpec("rank must satisfy 1 <= r < " + std::to_string(variables.size()));
        }
        if (!ordering.empty()) {
            std::vector<std::string> a = variables, b = ordering;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) throw InvalidSpec("ordering must be a permutation of the endogenous variables");
        }
    }
};

}  // namespace panelbreak
