#pragma once

// JSON views of the library's reports. Indices are written 1-based.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "schauder/constants.hpp"
#include "schauder/harmonic_demo.hpp"
#include "schauder/olevskii.hpp"
#include "schauder/riesz.hpp"
#include "schauder/selection.hpp"

namespace schauder {

using Json = nlohmann::ordered_json;

/// Finite numbers as-is; +-infinity as the strings "Infinity" / "-Infinity".
inline Json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return v > 0 ? "Infinity" : "-Infinity";
}

inline Json one_based(const std::vector<std::size_t>& idx) {
    Json out = Json::array();
    for (auto i : idx) {
        out.push_back(i + 1);
    }
    return out;
}

inline std::vector<std::size_t> zero_based(const Json& arr, const char* what) {
    std::vector<std::size_t> out;
    for (const auto& v : arr) {
        const auto i = v.get<long long>();
        if (i < 1) {
            throw InvalidInput(std::string(what) + ": indices are 1-based");
        }
        out.push_back(static_cast<std::size_t>(i - 1));
    }
    return out;
}

inline Json to_json(const ConstantEstimate& e) {
    return Json{{"value", e.value},
                {"mode", to_string(e.mode)},
                {"witness", one_based(e.witness)},
                {"evaluations", e.evaluations}};
}

inline Json to_json(const RieszReport& r) {
    Json kappa = Json::array();
    for (double c : r.condition_numbers) {
        kappa.push_back(json_number(c));
    }
    return Json{{"sectionSizes", r.section_sizes}, {"conditionNumbers", kappa}, {"verdict", to_string(r.verdict)}};
}

inline Json to_json(const OlevskiiPlan& plan) {
    Json subsets = Json::array();
    for (const auto& s : plan.subsets) {
        subsets.push_back(one_based(s));
    }
    Json bounds = Json::array();
    for (const auto& b : plan.bounds) {
        bounds.push_back(Json::array({b.c, b.d}));
    }
    Json leftovers = Json::array();
    for (const auto& s : plan.leftovers) {
        leftovers.push_back(one_based(s));
    }
    Json out{{"levels", plan.levels()},
             {"alpha", plan.alpha},
             {"subsets", subsets},
             {"cBounds", bounds},
             {"leftovers", leftovers}};
    if (!plan.passthrough.empty()) {
        out["passthrough"] = one_based(plan.passthrough);
    }
    return out;
}

inline OlevskiiPlan plan_from_json(const Json& j) {
    OlevskiiPlan plan;
    try {
        plan.alpha = j.at("alpha").get<double>();
        for (const auto& s : j.at("subsets")) {
            plan.subsets.push_back(zero_based(s, "subsets"));
        }
        for (const auto& b : j.at("cBounds")) {
            if (b.size() != 2) {
                throw InvalidInput("cBounds entries are [c, d] pairs");
            }
            plan.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
        }
        if (j.contains("leftovers")) {
            for (const auto& s : j.at("leftovers")) {
                plan.leftovers.push_back(zero_based(s, "leftovers"));
            }
        }
        if (j.contains("passthrough")) {
            plan.passthrough = zero_based(j.at("passthrough"), "passthrough");
        }
        if (j.contains("levels") && j.at("levels").get<std::size_t>() != plan.subsets.size()) {
            throw InvalidInput("'levels' does not match the number of subsets");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed plan JSON: ") + e.what());
    }
    return plan;
}

inline Json to_json(const ValidationReport& r) {
    Json violations = Json::array();
    for (const auto& v : r.violations) {
        Json item{{"condition", std::string(1, v.condition)}, {"level", v.level}};
        if (v.index) {
            item["index"] = *v.index + 1;
        }
        item["message"] = v.message;
        violations.push_back(std::move(item));
    }
    return Json{{"valid", r.valid()}, {"violations", violations}};
}

inline Json to_json(const SelectionResult& s) {
    return Json{{"plan", to_json(s.plan)}, {"t0PerLevel", s.t0_per_level}, {"windowCounts", s.window_counts}};
}

inline Json to_json(const RatioReport& r) {
    return Json{{"passes", r.passes},
                {"maxRatio", r.max_ratio},
                {"firstQuarterMean", r.first_quarter_mean},
                {"lastQuarterMean", r.last_quarter_mean},
                {"tailRatios", r.tail_ratios}};
}

inline Json to_json(const HarmonicDemoReport& r) {
    Json uncond = Json::array();
    Json estimates = Json::array();
    for (const auto& e : r.unconditional_by_level) {
        uncond.push_back(e.value);
        estimates.push_back(to_json(e));
    }
    return Json{{"selection", to_json(r.selection)},
                {"validation", to_json(r.validation)},
                {"sectionSize", r.section_size},
                {"basisByLevel", r.basis_by_level},
                {"unconditionalByLevel", uncond},
                {"unconditionalEstimates", estimates},
                {"strictlyIncreasing", r.strictly_increasing},
                {"quasinormality", Json{{"min", r.quasinormality.min},
                                        {"max", r.quasinormality.max},
                                        {"ratio", json_number(r.quasinormality.ratio())}}},
                {"unitaryDeviation", r.unitary_deviation},
                {"factorizationResidual", r.factorization_residual},
                {"scalingCondition", json_number(r.scaling_condition)},
                {"riesz", to_json(r.riesz)}};
}

} // namespace schauder
