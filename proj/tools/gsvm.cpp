// Experiment command line: simulate, fit, cv, mtl, eval, compare, report.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>

#include "gsvm/evaluation.hpp"
#include "gsvm/io.hpp"
#include "gsvm/model_selection.hpp"
#include "gsvm/mtl.hpp"
#include "gsvm/rng.hpp"
#include "gsvm/solver.hpp"
#include "gsvm/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gsvm;

namespace {

void write_config(const fs::path& dir, const json& config) {
    std::ofstream out(dir / "config.json");
    if (!out) throw std::runtime_error("cannot write config in " + dir.string());
    out << config.dump(2) << '\n';
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

RegularizerSpec spec_from_flag(const std::string& reg, double q, double lambda) {
    RegularizerSpec spec;
    spec.q = q;
    spec.lambda = lambda;
    if (reg == "l2") {
        spec.kind = RegKind::L2;
    } else if (reg == "l1") {
        spec.kind = RegKind::L1;
    } else if (reg == "gl2") {
        spec.kind = RegKind::GroupLq;
        spec.q = 2.0;
    } else if (reg == "glq") {
        spec.kind = RegKind::GroupLq;
    } else if (reg == "adaptive") {
        spec.kind = RegKind::AdaptiveGroupLq;
    } else {
        throw std::invalid_argument("unknown regularizer flag '" + reg + "'");
    }
    return spec;
}

// Column standardization fitted on the training set; constant columns are
// left unscaled.
struct Standardizer {
    Vector mean;
    Vector scale;

    static Standardizer fit(const TrialSet& data) {
        Standardizer s;
        s.mean = data.features.colwise().mean();
        const Eigen::Index n = data.features.rows();
        s.scale.resize(data.features.cols());
        for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
            const double var =
                (data.features.col(j).array() - s.mean[j]).square().sum() /
                static_cast<double>(n);
            const double sd = std::sqrt(var);
            s.scale[j] = sd > 0.0 ? sd : 1.0;
        }
        return s;
    }

    void apply(TrialSet& data) const {
        data.features = (data.features.rowwise() - mean.transpose()).array().rowwise() /
                        scale.transpose().array();
    }
};

void write_grid_csv(const fs::path& path, const std::vector<GridRow>& rows,
                    bool append = false) {
    const bool exists = append && fs::exists(path);
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (!exists) out << "lambda,q,lambda_s,fold,auc\n";
    for (const GridRow& row : rows) {
        out << format_double(row.lambda) << ',';
        if (row.q) out << format_double(*row.q);
        out << ',';
        if (row.lambda_s) out << format_double(*row.lambda_s);
        out << ',' << row.fold << ',' << format_double(row.auc) << '\n';
    }
}

json chosen_to_json(const ChosenPoint& chosen) {
    json doc;
    doc["lambda"] = chosen.lambda;
    if (chosen.q) doc["q"] = *chosen.q;
    if (chosen.lambda_s) doc["lambda_s"] = *chosen.lambda_s;
    doc["mean_auc"] = chosen.mean_auc;
    return doc;
}

void write_selection_frequency(const fs::path& path, const std::vector<int>& counts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "sensor,count\n";
    for (std::size_t s = 0; s < counts.size(); ++s) {
        out << s << ',' << counts[s] << '\n';
    }
}

int cmd_simulate(const std::string& out, const SimConfig& config) {
    const fs::path dir = ensure_out_dir(out);
    const SimData data = generate(config);

    save_trials_csv(data.train, (dir / "train.csv").string());
    save_trials_csv(data.test, (dir / "test.csv").string());
    save_layout(data.train.layout, (dir / "layout.json").string());
    save_ground_truth(data.truth, (dir / "truth.json").string());

    json cfg;
    cfg["command"] = "simulate";
    cfg["channels"] = config.sensors;
    cfg["relevant"] = config.relevant;
    cfg["samples"] = config.samples_per_sensor;
    cfg["n_total"] = config.n_total;
    cfg["n_train"] = config.n_train;
    cfg["noise_std"] = config.noise_std;
    cfg["positive_rate"] = config.positive_rate;
    cfg["template_peak"] = config.template_amplitude;
    cfg["relevant_sensors"] = data.truth.relevant_sensors;
    cfg["seed"] = config.seed;
    write_config(dir, cfg);

    std::cout << "wrote " << config.n_train << " train and "
              << (config.n_total - config.n_train) << " test trials ("
              << config.sensors * config.samples_per_sensor << " features) to "
              << dir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-sparse large-margin classifiers for ERP decoding"};
    app.require_subcommand(1);

    // ---- simulate ----
    SimConfig sim;
    std::string sim_out;
    std::vector<int> sim_relevant_sensors;
    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a simulated ERP dataset");
    simulate_cmd->add_option("--out", sim_out, "Output directory")->required();
    simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
    simulate_cmd->add_option("--channels", sim.sensors, "Sensor count");
    simulate_cmd->add_option("--relevant", sim.relevant, "Discriminative sensor count");
    simulate_cmd->add_option("--samples", sim.samples_per_sensor, "Features per sensor");
    simulate_cmd->add_option("--n-total", sim.n_total, "Total examples");
    simulate_cmd->add_option("--n-train", sim.n_train, "Training examples");
    simulate_cmd->add_option("--noise-std", sim.noise_std, "Noise standard deviation");
    simulate_cmd->add_option("--positive-rate", sim.positive_rate, "Positive fraction");
    simulate_cmd->add_option("--template-peak", sim.template_amplitude,
                             "Peak amplitude of the evoked waveform");
    simulate_cmd->add_option("--relevant-sensors", sim_relevant_sensors,
                             "Explicit relevant sensor indices");

    // ---- shared fit/cv options ----
    std::string train_path, test_path, layout_path, truth_path, out_dir;
    std::string reg_flag = "l2";
    double opt_q = 2.0;
    double opt_lambda = -1.0;
    long long row_seed = 0;
    std::string method_label;
    bool standardize = false;
    SolveSettings settings;
    int jobs = 1;

    auto add_data_options = [&](CLI::App* cmd, bool test_required) {
        cmd->add_option("--train", train_path, "Training trials CSV")->required();
        cmd->add_option("--layout", layout_path, "Layout JSON")->required();
        auto* test_opt = cmd->add_option("--test", test_path, "Test trials CSV");
        if (test_required) test_opt->required();
        cmd->add_option("--truth", truth_path, "Ground-truth JSON (for F-measure)");
        cmd->add_option("--out", out_dir, "Output directory")->required();
        cmd->add_option("--seed", row_seed, "Seed / run key");
        cmd->add_option("--method", method_label, "Method label for eval rows");
        cmd->add_flag("--standardize", standardize, "Standardize features on the train set");
        cmd->add_option("--max-iter", settings.max_iterations, "Iteration cap");
        cmd->add_option("--tol", settings.rel_objective_tol, "Relative objective tolerance");
        cmd->add_option("--jobs", jobs, "Worker threads");
    };

    auto* fit_cmd = app.add_subcommand("fit", "Fit one model at fixed hyperparameters");
    add_data_options(fit_cmd, false);
    fit_cmd->add_option("--reg", reg_flag, "l2|l1|gl2|glq|adaptive")->required();
    fit_cmd->add_option("--q", opt_q, "Inner norm exponent in [1,2]");
    fit_cmd->add_option("--lambda", opt_lambda, "Regularization strength")->required();
    bool accelerated = false;
    fit_cmd->add_flag("--accelerated", accelerated, "Momentum on the forward step");

    // ---- cv ----
    GridSpec grid;
    std::vector<double> lambda_grid_flag, q_grid_flag;
    int repeats = 1;
    auto* cv_cmd = app.add_subcommand("cv", "Nested cross-validation then refit");
    add_data_options(cv_cmd, false);
    cv_cmd->add_option("--reg", reg_flag, "l2|l1|gl2|glq|adaptive")->required();
    cv_cmd->add_option("--q", opt_q, "Fixed q when not tuned");
    cv_cmd->add_option("--grid", lambda_grid_flag, "Lambda grid values");
    cv_cmd->add_option("--q-grid", q_grid_flag, "q grid values (glq only)");
    cv_cmd->add_option("--folds", grid.folds, "Fold count");
    cv_cmd->add_option("--repeats", repeats, "Independent CV repetitions");

    // ---- mtl ----
    std::vector<std::string> mtl_train, mtl_test;
    std::string mtl_method;
    double lambda_r = -1.0, lambda_s = 0.0;
    bool use_cv = false;
    std::vector<double> lambda_r_grid_flag, lambda_s_grid_flag;
    int n_per_task = 0;
    auto* mtl_cmd = app.add_subcommand("mtl", "Multi-task and pooled baselines");
    mtl_cmd->add_option("--train", mtl_train, "Per-task training CSVs")->required();
    mtl_cmd->add_option("--test", mtl_test, "Per-task test CSVs (same order)");
    mtl_cmd->add_option("--layout", layout_path, "Shared layout JSON")->required();
    mtl_cmd->add_option("--method", mtl_method, "mgsvm2|mgsvm2s|svm|svm-full")->required();
    mtl_cmd->add_option("--lambda", opt_lambda, "Lambda for svm / svm-full");
    mtl_cmd->add_option("--lambda-r", lambda_r, "Group sparsity strength");
    mtl_cmd->add_option("--lambda-s", lambda_s, "Similarity strength");
    mtl_cmd->add_flag("--cv", use_cv, "Select hyperparameters by nested CV");
    mtl_cmd->add_option("--grid", lambda_r_grid_flag, "Lambda(_r) grid for --cv");
    mtl_cmd->add_option("--lambda-s-grid", lambda_s_grid_flag, "Lambda_s grid for --cv");
    mtl_cmd->add_option("--folds", grid.folds, "Fold count for --cv");
    mtl_cmd->add_option("--n-per-task", n_per_task, "Subsample each task's train set");
    mtl_cmd->add_option("--truth", truth_path, "Ground-truth JSON");
    mtl_cmd->add_option("--out", out_dir, "Output directory")->required();
    mtl_cmd->add_option("--seed", row_seed, "Seed / run key");
    mtl_cmd->add_option("--max-iter", settings.max_iterations, "Iteration cap");
    mtl_cmd->add_option("--tol", settings.rel_objective_tol, "Relative objective tolerance");
    mtl_cmd->add_option("--jobs", jobs, "Worker threads");

    // ---- eval ----
    std::string model_path, data_path;
    auto* eval_cmd = app.add_subcommand("eval", "Score a saved model on a dataset");
    eval_cmd->add_option("--model", model_path, "Model JSON")->required();
    eval_cmd->add_option("--data", data_path, "Trials CSV")->required();
    eval_cmd->add_option("--layout", layout_path, "Layout JSON")->required();
    eval_cmd->add_option("--truth", truth_path, "Ground-truth JSON");
    eval_cmd->add_option("--method", method_label, "Method label")->required();
    eval_cmd->add_option("--seed", row_seed, "Seed / run key");
    eval_cmd->add_option("--out", out_dir, "Output directory")->required();

    // ---- compare ----
    std::string file_a, file_b, method_a, method_b, compare_out;
    auto* compare_cmd = app.add_subcommand("compare", "Paired Wilcoxon test on eval CSVs");
    compare_cmd->add_option("--a", file_a, "First eval CSV")->required();
    compare_cmd->add_option("--b", file_b, "Second eval CSV")->required();
    compare_cmd->add_option("--method-a", method_a, "Method filter for --a");
    compare_cmd->add_option("--method-b", method_b, "Method filter for --b");
    compare_cmd->add_option("--out", compare_out, "Output JSON path");

    // ---- report ----
    std::string report_in, report_out;
    auto* report_cmd = app.add_subcommand("report", "Aggregate an eval CSV by method");
    report_cmd->add_option("--input", report_in, "Eval CSV")->required();
    report_cmd->add_option("--out", report_out, "Aggregated CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate_cmd->parsed()) {
            sim.relevant_sensors = sim_relevant_sensors;
            return cmd_simulate(sim_out, sim);
        }

        settings.validate();

        if (fit_cmd->parsed() || cv_cmd->parsed()) {
            const fs::path dir = ensure_out_dir(out_dir);
            const SensorLayout layout = load_layout(layout_path);
            TrialSet train = load_trials_csv(train_path, layout);
            std::optional<TrialSet> test;
            if (!test_path.empty()) test = load_trials_csv(test_path, layout);
            std::optional<GroundTruth> truth;
            if (!truth_path.empty()) truth = load_ground_truth(truth_path);
            if (standardize) {
                const Standardizer scaler = Standardizer::fit(train);
                scaler.apply(train);
                if (test) scaler.apply(*test);
            }
            const GroupPartition groups = sensor_groups(layout);
            const std::string label = method_label.empty() ? reg_flag : method_label;

            json cfg;
            cfg["train"] = train_path;
            cfg["test"] = test_path;
            cfg["layout"] = layout_path;
            cfg["truth"] = truth_path;
            cfg["reg"] = reg_flag;
            cfg["seed"] = row_seed;
            cfg["standardize"] = standardize;
            cfg["max_iter"] = settings.max_iterations;
            cfg["tol"] = settings.rel_objective_tol;
            cfg["jobs"] = jobs;
            cfg["method"] = label;

            auto emit_eval = [&](const LinearModel& model, long long key) {
                if (!test) return;
                EvalReport report =
                    truth ? evaluate_model(model, *test, truth->relevant_sensors)
                          : evaluate_model(model, *test);
                EvalRow row{label, key, report.auc, report.selection_rate,
                            report.f_measure};
                append_eval_rows((dir / "eval.csv").string(), {row});
            };

            if (fit_cmd->parsed()) {
                cfg["command"] = "fit";
                cfg["q"] = opt_q;
                cfg["lambda"] = opt_lambda;
                cfg["accelerated"] = accelerated;
                settings.accelerated = accelerated;
                const RegularizerSpec spec = spec_from_flag(reg_flag, opt_q, opt_lambda);
                LinearModel model;
                if (spec.kind == RegKind::AdaptiveGroupLq) {
                    model = fit_adaptive(train, spec.q, spec.lambda, groups, settings);
                } else {
                    model = fbs_solve(train, spec, groups, settings);
                }
                save_model(model, (dir / "model.json").string());
                emit_eval(model, row_seed);
                write_config(dir, cfg);
                std::cout << "fit done: " << model.diagnostics.iterations
                          << " iterations, objective "
                          << format_double(model.diagnostics.final_objective()) << '\n';
                return 0;
            }

            // cv
            cfg["command"] = "cv";
            cfg["folds"] = grid.folds;
            cfg["repeats"] = repeats;
            if (repeats < 1) throw std::invalid_argument("cv: repeats must be >= 1");
            if (!lambda_grid_flag.empty()) grid.lambda_grid = lambda_grid_flag;
            if (!q_grid_flag.empty()) grid.q_grid = q_grid_flag;
            cfg["lambda_grid"] = grid.lambda_grid;
            const RegularizerSpec prototype = spec_from_flag(reg_flag, opt_q, 1.0);
            const bool tune_q = reg_flag == "glq";
            if (tune_q) cfg["q_grid"] = grid.q_grid;

            json chosen_list = json::array();
            for (int rep = 0; rep < repeats; ++rep) {
                GridSpec rep_grid = grid;
                rep_grid.seed = static_cast<std::uint64_t>(row_seed) +
                                static_cast<std::uint64_t>(rep);
                const CvReport report =
                    cv_select(train, prototype, rep_grid, groups, settings, tune_q, jobs);
                write_grid_csv(dir / "grid.csv", report.rows, rep > 0);
                json chosen = chosen_to_json(report.chosen);
                chosen["repeat"] = rep;
                chosen_list.push_back(chosen);
                const std::string model_name =
                    repeats == 1 ? "model.json" : "model_rep" + std::to_string(rep) + ".json";
                save_model(report.refit, (dir / model_name).string());
                emit_eval(report.refit, row_seed + rep);
            }
            std::ofstream chosen_out(dir / "chosen.json");
            chosen_out << (repeats == 1 ? chosen_list[0] : chosen_list).dump(2) << '\n';
            write_config(dir, cfg);
            std::cout << "cv done: " << repeats << " repeat(s)\n";
            return 0;
        }

        if (mtl_cmd->parsed()) {
            const fs::path dir = ensure_out_dir(out_dir);
            const SensorLayout layout = load_layout(layout_path);
            if (!mtl_test.empty() && mtl_test.size() != mtl_train.size()) {
                throw std::invalid_argument("mtl: --test count must match --train count");
            }
            TaskCollection tasks;
            for (const std::string& path : mtl_train) {
                tasks.tasks.push_back(load_trials_csv(path, layout));
            }
            if (n_per_task > 0) {
                for (std::size_t t = 0; t < tasks.tasks.size(); ++t) {
                    TrialSet& task = tasks.tasks[t];
                    if (n_per_task >= task.n()) continue;
                    rng::Engine eng(static_cast<std::uint64_t>(row_seed) + t);
                    std::vector<int> idx = rng::permutation(task.n(), eng);
                    idx.resize(static_cast<std::size_t>(n_per_task));
                    task = task.subset(idx);
                }
            }
            tasks.validate();
            const int m = tasks.task_count();
            std::vector<TrialSet> tests;
            for (const std::string& path : mtl_test) {
                tests.push_back(load_trials_csv(path, layout));
            }
            std::optional<GroundTruth> truth;
            if (!truth_path.empty()) truth = load_ground_truth(truth_path);

            json cfg;
            cfg["command"] = "mtl";
            cfg["method"] = mtl_method;
            cfg["train"] = mtl_train;
            cfg["test"] = mtl_test;
            cfg["layout"] = layout_path;
            cfg["seed"] = row_seed;
            cfg["n_per_task"] = n_per_task;
            cfg["cv"] = use_cv;
            cfg["folds"] = grid.folds;
            cfg["jobs"] = jobs;

            const std::string label = method_label.empty() ? mtl_method : method_label;
            std::vector<EvalRow> rows;
            auto eval_task = [&](const LinearModel& model, int t) {
                if (tests.empty()) return;
                EvalReport report =
                    truth ? evaluate_model(model, tests[static_cast<std::size_t>(t)],
                                           truth->relevant_sensors)
                          : evaluate_model(model, tests[static_cast<std::size_t>(t)]);
                rows.push_back(EvalRow{label, t, report.auc, report.selection_rate,
                                       report.f_measure});
            };

            std::vector<double> r_grid =
                lambda_r_grid_flag.empty() ? log_spaced(1e-3, 1e1, 13) : lambda_r_grid_flag;
            std::vector<double> s_grid = lambda_s_grid_flag;
            if (s_grid.empty()) {
                s_grid.push_back(0.0);
                for (double v : log_spaced(1e-3, 1e1, 6)) s_grid.push_back(v);
            }

            if (mtl_method == "svm" || mtl_method == "svm-full") {
                auto fit_one = [&](const TrialSet& data) {
                    if (use_cv) {
                        GridSpec g;
                        g.lambda_grid = r_grid;
                        g.folds = grid.folds;
                        g.seed = static_cast<std::uint64_t>(row_seed);
                        const CvReport report =
                            cv_select(data, RegularizerSpec{RegKind::L2, 2.0, 1.0}, g,
                                      sensor_groups(layout), settings, false, jobs);
                        return report.refit;
                    }
                    if (!(opt_lambda > 0.0)) {
                        throw std::invalid_argument("mtl: provide --lambda or --cv");
                    }
                    return fbs_solve(data, RegularizerSpec{RegKind::L2, 2.0, opt_lambda},
                                     sensor_groups(layout), settings);
                };
                if (mtl_method == "svm") {
                    for (int t = 0; t < m; ++t) {
                        const LinearModel model =
                            fit_one(tasks.tasks[static_cast<std::size_t>(t)]);
                        save_model(model,
                                   (dir / ("model_task" + std::to_string(t) + ".json"))
                                       .string());
                        eval_task(model, t);
                    }
                } else {
                    const LinearModel model = fit_one(concatenate(tasks));
                    save_model(model, (dir / "model.json").string());
                    for (int t = 0; t < m && !tests.empty(); ++t) eval_task(model, t);
                }
            } else if (mtl_method == "mgsvm2" || mtl_method == "mgsvm2s") {
                const bool with_similarity = mtl_method == "mgsvm2s";
                MtlModel model;
                if (use_cv) {
                    if (!with_similarity) s_grid = {0.0};
                    const MtlCvReport report = cv_select_mtl(
                        tasks, r_grid, s_grid, grid.folds,
                        static_cast<std::uint64_t>(row_seed), settings, jobs);
                    write_grid_csv(dir / "grid.csv", report.rows);
                    std::ofstream chosen_out(dir / "chosen.json");
                    chosen_out << chosen_to_json(report.chosen).dump(2) << '\n';
                    model = report.refit;
                } else {
                    if (!(lambda_r >= 0.0)) {
                        throw std::invalid_argument("mtl: provide --lambda-r or --cv");
                    }
                    const MtlSpec spec{lambda_r, with_similarity ? lambda_s : 0.0};
                    model = fit_mtl(tasks, spec, settings);
                }
                for (int t = 0; t < m; ++t) {
                    save_model(
                        model.tasks[static_cast<std::size_t>(t)],
                        (dir / ("model_task" + std::to_string(t) + ".json")).string());
                    eval_task(model.tasks[static_cast<std::size_t>(t)], t);
                }
            } else {
                throw std::invalid_argument("mtl: unknown method '" + mtl_method + "'");
            }

            if (!rows.empty()) append_eval_rows((dir / "eval.csv").string(), rows);
            write_config(dir, cfg);
            std::cout << "mtl " << mtl_method << " done on " << m << " task(s)\n";
            return 0;
        }

        if (eval_cmd->parsed()) {
            const fs::path dir = ensure_out_dir(out_dir);
            const SensorLayout layout = load_layout(layout_path);
            const LinearModel model = load_model(model_path);
            const TrialSet data = load_trials_csv(data_path, layout);
            std::optional<GroundTruth> truth;
            if (!truth_path.empty()) truth = load_ground_truth(truth_path);
            const EvalReport report =
                truth ? evaluate_model(model, data, truth->relevant_sensors)
                      : evaluate_model(model, data);
            append_eval_rows((dir / "eval.csv").string(),
                             {EvalRow{method_label, row_seed, report.auc,
                                      report.selection_rate, report.f_measure}});
            write_selection_frequency(dir / "selection.csv",
                                      selection_frequency({model}, layout));
            json cfg{{"command", "eval"},       {"model", model_path},
                     {"data", data_path},       {"layout", layout_path},
                     {"truth", truth_path},     {"method", method_label},
                     {"seed", row_seed}};
            write_config(dir, cfg);
            std::cout << "auc " << format_double(report.auc) << ", selected "
                      << report.selected_sensors.size() << '/' << layout.sensors << '\n';
            return 0;
        }

        if (compare_cmd->parsed()) {
            auto collect = [](const std::string& path, std::string& method) {
                std::map<long long, double> by_seed;
                for (const EvalRow& row : load_eval_csv(path)) {
                    if (!method.empty() && row.method != method) continue;
                    if (method.empty()) method = row.method;
                    if (row.method != method) {
                        throw std::runtime_error(
                            "compare: " + path +
                            " mixes methods; filter with --method-a/--method-b");
                    }
                    if (by_seed.count(row.seed)) {
                        throw std::runtime_error("compare: duplicate seed key " +
                                                 std::to_string(row.seed) + " in " + path);
                    }
                    by_seed[row.seed] = row.auc;
                }
                if (by_seed.empty()) {
                    throw std::runtime_error("compare: no rows found in " + path);
                }
                return by_seed;
            };
            std::string label_a = method_a;
            std::string label_b = method_b;
            const auto rows_a = collect(file_a, label_a);
            const auto rows_b = collect(file_b, label_b);
            std::vector<double> a_vals, b_vals;
            for (const auto& [seed, value] : rows_a) {
                const auto it = rows_b.find(seed);
                if (it == rows_b.end()) {
                    throw std::runtime_error("compare: unpaired seed key " +
                                             std::to_string(seed));
                }
                a_vals.push_back(value);
                b_vals.push_back(it->second);
            }
            if (rows_b.size() != rows_a.size()) {
                throw std::runtime_error("compare: unpaired seed keys between files");
            }
            const double p = wilcoxon_signed_rank(a_vals, b_vals);
            json doc{{"method_a", label_a},
                     {"method_b", label_b},
                     {"pairs", a_vals.size()},
                     {"p_value", p},
                     {"config", {{"a", file_a}, {"b", file_b}}}};
            if (!compare_out.empty()) {
                std::ofstream out(compare_out);
                if (!out) throw std::runtime_error("cannot write " + compare_out);
                out << doc.dump(2) << '\n';
            }
            std::cout << doc.dump(2) << '\n';
            return 0;
        }

        if (report_cmd->parsed()) {
            struct Agg {
                int n = 0;
                double auc_sum = 0.0, auc_sq = 0.0, sel_sum = 0.0;
                double f_sum = 0.0;
                int f_n = 0;
            };
            std::map<std::string, Agg> by_method;
            for (const EvalRow& row : load_eval_csv(report_in)) {
                Agg& agg = by_method[row.method];
                agg.n += 1;
                agg.auc_sum += row.auc;
                agg.auc_sq += row.auc * row.auc;
                agg.sel_sum += row.selection_rate;
                if (row.f_measure) {
                    agg.f_sum += *row.f_measure;
                    agg.f_n += 1;
                }
            }
            std::ostringstream table;
            table << "method,runs,avg_auc,std_auc,avg_sel,avg_fmeasure\n";
            std::cout << std::left << std::setw(12) << "method" << std::right
                      << std::setw(6) << "runs" << std::setw(10) << "AUC%"
                      << std::setw(8) << "std" << std::setw(8) << "Sel%"
                      << std::setw(8) << "F%" << '\n';
            for (const auto& [method, agg] : by_method) {
                const double mean = agg.auc_sum / agg.n;
                const double var = std::max(0.0, agg.auc_sq / agg.n - mean * mean);
                const double sel = agg.sel_sum / agg.n;
                const double f = agg.f_n > 0 ? agg.f_sum / agg.f_n : 0.0;
                std::cout << std::left << std::setw(12) << method << std::right
                          << std::setw(6) << agg.n << std::fixed << std::setprecision(2)
                          << std::setw(10) << 100.0 * mean << std::setw(8)
                          << 100.0 * std::sqrt(var) << std::setw(8) << 100.0 * sel
                          << std::setw(8) << (agg.f_n > 0 ? 100.0 * f : 0.0)
                          << std::defaultfloat << '\n';
                table << method << ',' << agg.n << ',' << format_double(mean) << ','
                      << format_double(std::sqrt(var)) << ',' << format_double(sel)
                      << ',' << (agg.f_n > 0 ? format_double(f) : "") << '\n';
            }
            if (!report_out.empty()) {
                std::ofstream out(report_out);
                if (!out) throw std::runtime_error("cannot write " + report_out);
                out << table.str();
            }
            return 0;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
