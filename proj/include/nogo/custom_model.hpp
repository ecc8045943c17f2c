// custom_model.hpp
// Finite hidden-variable models loaded from JSON:
//
//   {
//     "directions": [[theta, phi], ...],
//     "points": [
//       {"point_weight": 0.5, "outcomes": {"0": 1, "1": -1, ...}},
//       ...
//     ]
//   }
//
// Each point lists an outcome for every direction index. Evaluating the
// model at an arbitrary direction uses the nearest listed direction.

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nogo/errors.hpp"
#include "nogo/hv_models.hpp"

namespace nogo {

struct CustomModelSpec {
    std::vector<Direction> directions;
    std::vector<double> weights;
    std::vector<std::vector<double>> outcomes; // [point][direction]
};

inline CustomModelSpec parse_custom_model(const nlohmann::json& j) {
    CustomModelSpec spec;
    try {
        for (const auto& d : j.at("directions")) {
            if (d.is_array())
                spec.directions.push_back(
                    Direction::from_angles(d.at(0).get<double>(), d.at(1).get<double>()));
            else
                spec.directions.push_back(
                    Direction::from_angles(d.at("theta").get<double>(), d.at("phi").get<double>()));
        }
        if (spec.directions.empty()) throw InvalidArgument("custom model needs at least one direction");
        for (const auto& p : j.at("points")) {
            spec.weights.push_back(p.at("point_weight").get<double>());
            std::vector<double> row(spec.directions.size(), 0.0);
            std::vector<bool> seen(spec.directions.size(), false);
            for (const auto& [key, value] : p.at("outcomes").items()) {
                const std::size_t idx = std::stoul(key);
                if (idx >= row.size())
                    throw InvalidArgument("outcome direction index " + key + " out of range");
                row[idx] = value.get<double>();
                seen[idx] = true;
            }
            for (std::size_t k = 0; k < seen.size(); ++k)
                if (!seen[k])
                    throw InvalidArgument("point " + std::to_string(spec.outcomes.size()) +
                                          " has no outcome for direction " + std::to_string(k));
            spec.outcomes.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed custom model: ") + e.what());
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const InvalidArgument*>(&e) != nullptr) throw;
        throw InvalidArgument(std::string("malformed custom model: ") + e.what());
    }
    return spec;
}

inline HVModel custom_model(const CustomModelSpec& spec) {
    auto space = FiniteProbabilitySpace::from_weights(spec.weights);
    auto outcome = [spec](const Direction& n, std::size_t point) {
        std::size_t best = 0;
        double best_dot = -2.0;
        for (std::size_t k = 0; k < spec.directions.size(); ++k) {
            const double d = dot(n.unit(), spec.directions[k].unit());
            if (d > best_dot) {
                best_dot = d;
                best = k;
            }
        }
        return spec.outcomes[point][best];
    };
    return finite_model(std::move(space), std::move(outcome), "custom-file");
}

inline HVModel load_custom_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open custom model file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("cannot parse custom model file " + path + ": " + e.what());
    }
    return custom_model(parse_custom_model(j));
}

} // namespace nogo
