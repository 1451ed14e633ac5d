#include "gsvm/io.hpp"

#include <charconv>
#include <limits>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gsvm {

using nlohmann::json;

namespace {

constexpr int kModelSchemaVersion = 1;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    return out;
}

double parse_double(const std::string& field, const std::string& context) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec == std::errc::result_out_of_range && ptr == end) {
        // overflowed literal; surfaces through the finiteness check
        return field.front() == '-' ? -std::numeric_limits<double>::infinity()
                                    : std::numeric_limits<double>::infinity();
    }
    if (ec != std::errc{} || ptr != end) {
        throw std::runtime_error(context + ": cannot parse number '" + field + "'");
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
        fields.back().pop_back();
    }
    return fields;
}

json parse_json_file(const std::string& path) {
    std::ifstream in = open_input(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& err) {
        throw std::runtime_error("malformed JSON in " + path + ": " + err.what());
    }
    return doc;
}

const json& require_field(const json& doc, const char* key, const std::string& path) {
    const auto it = doc.find(key);
    if (it == doc.end()) {
        throw std::runtime_error("schema error in " + path + ": missing field '" +
                                 key + "'");
    }
    return *it;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw std::runtime_error("cannot format double");
    return std::string(buffer, ptr);
}

SensorLayout load_layout(const std::string& path) {
    const json doc = parse_json_file(path);
    SensorLayout layout;
    layout.sensors = require_field(doc, "p", path).get<int>();
    layout.features_per_sensor = require_field(doc, "r", path).get<int>();
    if (doc.contains("sensor_names") && !doc["sensor_names"].is_null()) {
        layout.sensor_names = doc["sensor_names"].get<std::vector<std::string>>();
    }
    layout.validate();
    return layout;
}

void save_layout(const SensorLayout& layout, const std::string& path) {
    layout.validate();
    json doc;
    doc["p"] = layout.sensors;
    doc["r"] = layout.features_per_sensor;
    if (!layout.sensor_names.empty()) doc["sensor_names"] = layout.sensor_names;
    open_output(path) << doc.dump(2) << '\n';
}

TrialSet load_trials_csv(const std::string& path, const SensorLayout& layout) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("trials file is empty: " + path);
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "label") {
        throw std::runtime_error("trials file " + path +
                                 ": header must end with a 'label' column");
    }
    const int d = static_cast<int>(header.size()) - 1;
    if (d != layout.dim()) {
        throw std::runtime_error(
            "layout mismatch: " + path + " has " + std::to_string(d) +
            " feature columns but layout expects p*r = " + std::to_string(layout.dim()));
    }

    std::vector<double> values;
    std::vector<double> labels;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::string context = path + " row " + std::to_string(row);
        if (static_cast<int>(fields.size()) != d + 1) {
            throw std::runtime_error("malformed row in " + context + ": expected " +
                                     std::to_string(d + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        for (int j = 0; j < d; ++j) {
            const double v = parse_double(fields[static_cast<std::size_t>(j)], context);
            if (!std::isfinite(v)) {
                throw std::runtime_error("non-finite feature value in " + context);
            }
            values.push_back(v);
        }
        const double label = parse_double(fields.back(), context);
        if (label != 1.0 && label != -1.0) {
            throw std::runtime_error("label must be -1 or +1 in " + context);
        }
        labels.push_back(label);
    }
    if (labels.empty()) {
        throw std::runtime_error("trials file has no data rows: " + path);
    }

    TrialSet data;
    data.layout = layout;
    const int n = static_cast<int>(labels.size());
    data.features.resize(n, d);
    data.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            data.features(i, j) = values[static_cast<std::size_t>(i) *
                                             static_cast<std::size_t>(d) +
                                         static_cast<std::size_t>(j)];
        }
        data.labels[i] = labels[static_cast<std::size_t>(i)];
    }
    data.validate();
    return data;
}

void save_trials_csv(const TrialSet& data, const std::string& path) {
    data.validate();
    std::ofstream out = open_output(path);
    const int d = data.dim();
    for (int j = 0; j < d; ++j) out << 'f' << j << ',';
    out << "label\n";
    for (int i = 0; i < data.n(); ++i) {
        for (int j = 0; j < d; ++j) out << format_double(data.features(i, j)) << ',';
        out << (data.labels[i] > 0.0 ? "1" : "-1") << '\n';
    }
}

TrialSet load_trialset(const std::string& trials_path, const std::string& layout_path) {
    return load_trials_csv(trials_path, load_layout(layout_path));
}

void save_model(const LinearModel& model, const std::string& path) {
    json doc;
    doc["schema_version"] = kModelSchemaVersion;
    doc["w"] = std::vector<double>(model.w.data(), model.w.data() + model.w.size());
    doc["b"] = model.b;
    doc["regularizer"] = {{"kind", reg_kind_name(model.regularizer.kind)},
                          {"q", model.regularizer.q},
                          {"lambda", model.regularizer.lambda}};
    doc["selected_groups"] = model.selected_groups;
    doc["diagnostics"] = {
        {"iterations", model.diagnostics.iterations},
        {"final_objective", model.diagnostics.final_objective()},
        {"stop_reason", model.diagnostics.stop_reason == StopReason::Converged
                            ? "converged"
                            : "max_iter"}};
    open_output(path) << doc.dump(2) << '\n';
}

LinearModel load_model(const std::string& path) {
    const json doc = parse_json_file(path);
    const int version = require_field(doc, "schema_version", path).get<int>();
    if (version != kModelSchemaVersion) {
        throw std::runtime_error("schema error in " + path +
                                 ": unsupported schema version " +
                                 std::to_string(version));
    }
    LinearModel model;
    const std::vector<double> w =
        require_field(doc, "w", path).get<std::vector<double>>();
    model.w = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    model.b = require_field(doc, "b", path).get<double>();
    const json& reg = require_field(doc, "regularizer", path);
    model.regularizer.kind =
        reg_kind_from_name(require_field(reg, "kind", path).get<std::string>());
    model.regularizer.q = require_field(reg, "q", path).get<double>();
    model.regularizer.lambda = require_field(reg, "lambda", path).get<double>();
    if (doc.contains("selected_groups")) {
        model.selected_groups = doc["selected_groups"].get<std::vector<int>>();
    }
    if (doc.contains("diagnostics")) {
        const json& diag = doc["diagnostics"];
        if (diag.contains("iterations")) {
            model.diagnostics.iterations = diag["iterations"].get<int>();
        }
        if (diag.contains("final_objective")) {
            model.diagnostics.objective_trace = {diag["final_objective"].get<double>()};
        }
        if (diag.contains("stop_reason")) {
            model.diagnostics.stop_reason =
                diag["stop_reason"].get<std::string>() == "converged"
                    ? StopReason::Converged
                    : StopReason::MaxIterations;
        }
    }
    if (!model.w.allFinite() || !std::isfinite(model.b)) {
        throw std::runtime_error("schema error in " + path + ": non-finite weights");
    }
    return model;
}

void save_ground_truth(const GroundTruth& truth, const std::string& path) {
    json doc;
    doc["relevant_sensors"] = truth.relevant_sensors;
    open_output(path) << doc.dump(2) << '\n';
}

GroundTruth load_ground_truth(const std::string& path) {
    const json doc = parse_json_file(path);
    GroundTruth truth;
    truth.relevant_sensors =
        require_field(doc, "relevant_sensors", path).get<std::vector<int>>();
    return truth;
}

void append_eval_rows(const std::string& path, const std::vector<EvalRow>& rows) {
    const bool exists = static_cast<bool>(std::ifstream(path));
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    if (!exists) out << "method,seed,auc,selection_rate,f_measure\n";
    for (const EvalRow& row : rows) {
        out << row.method << ',' << row.seed << ',' << format_double(row.auc) << ','
            << format_double(row.selection_rate) << ',';
        if (row.f_measure) out << format_double(*row.f_measure);
        out << '\n';
    }
}

std::vector<EvalRow> load_eval_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("eval file is empty: " + path);
    }
    std::vector<EvalRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::string context = path + " row " + std::to_string(line_no);
        if (fields.size() != 5) {
            throw std::runtime_error("malformed row in " + context);
        }
        EvalRow row;
        row.method = fields[0];
        row.seed = static_cast<long long>(parse_double(fields[1], context));
        row.auc = parse_double(fields[2], context);
        row.selection_rate = parse_double(fields[3], context);
        if (!fields[4].empty()) row.f_measure = parse_double(fields[4], context);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gsvm
