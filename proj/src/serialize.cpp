#include "hubness/serialize.hpp"

#include "hubness/error.hpp"

#include <fstream>
#include <sstream>

namespace hubness {

nlohmann::json to_json(const HubnessReport& report) {
    return {
        {"k", report.k},
        {"n_points", report.n_points},
        {"k_skewness", report.k_skewness},
        {"robinhood", report.robinhood},
        {"antihub_count", report.antihub_count},
        {"max_k_occurrence", report.max_k_occurrence},
    };
}

HubnessReport hubness_report_from_json(const nlohmann::json& j) {
    HubnessReport r;
    r.k = j.at("k").get<std::size_t>();
    r.n_points = j.at("n_points").get<std::size_t>();
    r.k_skewness = j.at("k_skewness").get<double>();
    r.robinhood = j.at("robinhood").get<double>();
    r.antihub_count = j.at("antihub_count").get<std::size_t>();
    r.max_k_occurrence = j.at("max_k_occurrence").get<std::size_t>();
    return r;
}

nlohmann::json to_json(const Pipeline& pipeline) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& step : pipeline) {
        nlohmann::json obj = {{"kind", std::string(to_string(step.kind))}};
        if (step.seed) obj["seed"] = *step.seed;
        arr.push_back(std::move(obj));
    }
    return arr;
}

Pipeline parse_pipeline(const nlohmann::json& j, std::optional<std::uint64_t> default_seed) {
    if (!j.is_array()) {
        throw InvalidArgument("pipeline must be a JSON array");
    }
    Pipeline pipeline;
    for (const auto& item : j) {
        if (!item.is_object() || !item.contains("kind") || !item["kind"].is_string()) {
            throw InvalidArgument("pipeline steps must be objects with a string 'kind'");
        }
        TransformSpec step{parse_transform_kind(item["kind"].get<std::string>()), std::nullopt};
        if (item.contains("seed")) {
            if (!item["seed"].is_number_unsigned()) {
                throw InvalidArgument("pipeline seed must be a non-negative integer");
            }
            step.seed = item["seed"].get<std::uint64_t>();
        } else if (is_seeded(step.kind)) {
            step.seed = default_seed;
        }
        step.check();
        pipeline.push_back(step);
    }
    return pipeline;
}

Pipeline parse_pipeline(const std::string& text, std::optional<std::uint64_t> default_seed) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("pipeline is not valid JSON: ") + e.what());
    }
    return parse_pipeline(j, default_seed);
}

nlohmann::json to_json(const EvalResult& result, const Pipeline& pipeline) {
    return {
        {"chosen_k", result.chosen_k},
        {"error_rate", result.error_rate},
        {"n_test", result.predictions.size()},
        {"distance_mode", std::string(to_string(result.mode))},
        {"transform_pipeline", to_json(pipeline)},
    };
}

nlohmann::json to_json(const McNemarResult& result) {
    return {{"b", result.b}, {"c", result.c}, {"p_value", result.p_value}};
}

std::string k_occurrence_csv(const KOccurrence& occ) {
    std::string out = "index,count\n";
    for (std::size_t i = 0; i < occ.counts.size(); ++i) {
        out += std::to_string(i) + "," + std::to_string(occ.counts[i]) + "\n";
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void write_predictions_csv(const std::vector<int>& predictions, const std::filesystem::path& path) {
    std::string out = "row_index,predicted_label\n";
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        out += std::to_string(i) + "," + std::to_string(predictions[i]) + "\n";
    }
    write_text(path, out);
}

std::vector<int> read_predictions_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<int> predictions;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row++ == 0 && line == "row_index,predicted_label") continue;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::size_t index = 0;
        char comma = 0;
        int label = 0;
        if (!(fields >> index >> comma >> label) || comma != ',' || index != predictions.size()) {
            throw FormatError("malformed prediction line '" + line + "'", predictions.size());
        }
        predictions.push_back(label);
    }
    return predictions;
}

} // namespace hubness
