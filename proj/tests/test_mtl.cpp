#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gsvm/mtl.hpp"
#include "gsvm/rng.hpp"
#include "support/oracles.hpp"

using namespace gsvm;

namespace {

TrialSet random_task(int n, const SensorLayout& layout, std::uint64_t seed,
                     double signal = 0.8) {
    rng::Engine eng(seed);
    rng::GaussianSampler gauss(eng);
    TrialSet data;
    data.layout = layout;
    data.features.resize(n, layout.dim());
    data.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        data.labels[i] = rng::uniform01(eng) < 0.5 ? 1.0 : -1.0;
        for (int j = 0; j < layout.dim(); ++j) {
            data.features(i, j) =
                gauss.next() +
                (j < layout.features_per_sensor ? signal * data.labels[i] : 0.0);
        }
    }
    return data;
}

TaskCollection make_tasks(int m, int n, const SensorLayout& layout,
                          std::uint64_t seed) {
    TaskCollection tasks;
    for (int t = 0; t < m; ++t) {
        tasks.tasks.push_back(random_task(n, layout, seed + t));
    }
    return tasks;
}

// Group-only objective evaluated by direct loops, independent of the
// library's regularizer plumbing.
double group_only_objective(const TaskCollection& tasks, double lambda_r,
                            const Matrix& weights, const Vector& biases) {
    double value = 0.0;
    for (int t = 0; t < tasks.task_count(); ++t) {
        const TrialSet& task = tasks.tasks[t];
        for (int i = 0; i < task.n(); ++i) {
            const double margin =
                task.labels[i] * (task.features.row(i).dot(weights.col(t)) + biases[t]);
            const double slack = std::max(0.0, 1.0 - margin);
            value += slack * slack;
        }
    }
    const int r = tasks.layout().features_per_sensor;
    for (int sensor = 0; sensor < tasks.layout().sensors; ++sensor) {
        double norm_sq = 0.0;
        for (int t = 0; t < tasks.task_count(); ++t) {
            norm_sq += weights.col(t).segment(sensor * r, r).squaredNorm();
        }
        value += lambda_r * std::sqrt(norm_sq);
    }
    return value;
}

}  // namespace

TEST_CASE("a single task reduces to the single-task group fit") {
    const SensorLayout layout{3, 2, {}};
    TaskCollection tasks;
    tasks.tasks.push_back(random_task(40, layout, 1));
    SolveSettings settings;
    settings.rel_objective_tol = 1e-10;

    const MtlModel joint = fit_mtl(tasks, MtlSpec{0.4, 0.0}, settings);
    const LinearModel single =
        fbs_solve(tasks.tasks[0], RegularizerSpec{RegKind::GroupLq, 2.0, 0.4},
                  sensor_groups(layout), settings);

    const double a = joint.diagnostics.final_objective();
    const double b = single.diagnostics.final_objective();
    CHECK(std::abs(a - b) / std::max(1.0, std::abs(a)) < 1e-6);
}

TEST_CASE("a huge similarity weight collapses the classifiers") {
    const SensorLayout layout{3, 2, {}};
    const TaskCollection tasks = make_tasks(3, 30, layout, 5);
    SolveSettings settings;
    const MtlModel model = fit_mtl(tasks, MtlSpec{1e-3, 1e6}, settings);

    const Matrix weights = model.stacked();
    const Vector mean = weights.rowwise().mean();
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
        worst = std::max(worst, (weights.col(t) - mean).norm());
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("with no similarity term the objective matches the group-only form") {
    const SensorLayout layout{2, 2, {}};
    const TaskCollection tasks = make_tasks(2, 25, layout, 9);
    const SolveSettings settings;
    const MtlSpec spec{0.3, 0.0};
    const MtlModel model = fit_mtl(tasks, spec, settings);

    Vector biases(2);
    biases << model.tasks[0].b, model.tasks[1].b;
    const double library = mtl_objective(tasks, spec, model.stacked(), biases);
    const double direct = group_only_objective(tasks, 0.3, model.stacked(), biases);
    CHECK(std::abs(library - direct) <= 1e-8 * std::max(1.0, std::abs(direct)));
    CHECK(library == doctest::Approx(model.diagnostics.final_objective())
                         .epsilon(1e-12));
}

TEST_CASE("pooled fit with one task is the single-task fit") {
    const SensorLayout layout{2, 2, {}};
    TaskCollection tasks;
    tasks.tasks.push_back(random_task(30, layout, 13));
    const SolveSettings settings;
    const RegularizerSpec spec{RegKind::GroupLq, 2.0, 0.2};
    const LinearModel pooled = fit_pooled(tasks, spec, settings);
    const LinearModel single =
        fbs_solve(tasks.tasks[0], spec, sensor_groups(layout), settings);
    CHECK((pooled.w - single.w).norm() == 0.0);
    CHECK(pooled.b == single.b);
}

TEST_CASE("pooling a duplicated task doubles the loss at matched lambda scale") {
    const SensorLayout layout{2, 2, {}};
    TaskCollection doubled;
    const TrialSet task = random_task(30, layout, 17);
    doubled.tasks.push_back(task);
    doubled.tasks.push_back(task);
    SolveSettings settings;
    settings.rel_objective_tol = 1e-11;
    settings.max_iterations = 100000;

    const double lambda = 0.6;
    const LinearModel pooled =
        fit_pooled(doubled, RegularizerSpec{RegKind::GroupLq, 2.0, lambda}, settings);
    const LinearModel single =
        fbs_solve(task, RegularizerSpec{RegKind::GroupLq, 2.0, lambda / 2.0},
                  sensor_groups(layout), settings);

    // Pooled objective = 2 * (loss + (lambda/2) Omega), so the minimizers agree.
    const double pooled_obj = pooled.diagnostics.final_objective();
    const double single_obj = single.diagnostics.final_objective();
    CHECK(std::abs(pooled_obj / 2.0 - single_obj) / std::max(1.0, single_obj) < 1e-5);
}

TEST_CASE("mtl objective pinned values") {
    const SensorLayout layout{2, 2, {}};
    const TaskCollection tasks = make_tasks(3, 20, layout, 21);
    const Matrix zero = Matrix::Zero(4, 3);
    const Vector zero_b = Vector::Zero(3);
    CHECK(mtl_objective(tasks, MtlSpec{0.5, 0.5}, zero, zero_b) == 60.0);

    Matrix equal(4, 3);
    for (int t = 0; t < 3; ++t) equal.col(t) << 1.0, -0.5, 0.25, 2.0;
    const double with_similarity =
        mtl_objective(tasks, MtlSpec{0.0, 123.0}, equal, zero_b);
    const double without = mtl_objective(tasks, MtlSpec{0.0, 0.0}, equal, zero_b);
    CHECK(with_similarity == without);
}

TEST_CASE("the joint objective descends and the gradient passes finite differences") {
    const SensorLayout layout{2, 2, {}};
    const TaskCollection tasks = make_tasks(3, 15, layout, 23);
    const SolveSettings settings;
    const MtlModel model = fit_mtl(tasks, MtlSpec{0.2, 0.4}, settings);
    CHECK(model.diagnostics.max_trace_increase <= 1e-12);

    const SmoothPart smooth = SmoothPart::multi_task(tasks, 0.4);
    rng::Engine eng(29);
    rng::GaussianSampler gauss(eng);
    for (int trial = 0; trial < 10; ++trial) {
        Vector z(12), biases(3);
        for (int i = 0; i < 12; ++i) z[i] = 0.4 * gauss.next();
        for (int i = 0; i < 3; ++i) biases[i] = 0.4 * gauss.next();
        Vector gz, gb;
        smooth.grad(z, biases, gz, gb);
        Vector joint(15);
        joint << z, biases;
        const Vector fd = oracle::central_difference(
            [&](const Vector& v) { return smooth.value(v.head(12), v.tail(3)); },
            joint);
        Vector analytic(15);
        analytic << gz, gb;
        CHECK((analytic - fd).norm() / std::max(1.0, analytic.norm()) < 1e-5);
    }
}

TEST_CASE("task order only permutes the output") {
    const SensorLayout layout{2, 2, {}};
    const TaskCollection tasks = make_tasks(3, 20, layout, 31);
    TaskCollection permuted;
    permuted.tasks = {tasks.tasks[2], tasks.tasks[0], tasks.tasks[1]};
    SolveSettings settings;
    settings.rel_objective_tol = 1e-10;

    const MtlModel a = fit_mtl(tasks, MtlSpec{0.3, 0.5}, settings);
    const MtlModel b = fit_mtl(permuted, MtlSpec{0.3, 0.5}, settings);
    const int perm[3] = {2, 0, 1};
    for (int t = 0; t < 3; ++t) {
        CHECK((a.tasks[perm[t]].w - b.tasks[t].w).norm() < 1e-8);
        CHECK(std::abs(a.tasks[perm[t]].b - b.tasks[t].b) < 1e-8);
    }
}

TEST_CASE("stacked prox blocks are zero or nonzero across all tasks at once") {
    const SensorLayout layout{4, 2, {}};
    const GroupPartition stacked = build_mtl_groups(layout, 3);
    rng::Engine eng(37);
    rng::GaussianSampler gauss(eng);
    for (int trial = 0; trial < 200; ++trial) {
        Vector u(24);
        for (int i = 0; i < 24; ++i) u[i] = gauss.next();
        const double tau = rng::uniform(eng, 0.2, 4.0);
        const Vector x = prox_group_l2(u, tau, stacked).x;
        for (const Group& group : stacked.groups) {
            int zero = 0, nonzero = 0;
            for (int idx : group.indices) {
                (x[idx] == 0.0 ? zero : nonzero) += 1;
            }
            CHECK((zero == 0 || nonzero == 0));
        }
    }
}

TEST_CASE("mtl input validation") {
    const SensorLayout layout{2, 2, {}};
    TaskCollection tasks = make_tasks(2, 20, layout, 41);
    CHECK_THROWS_AS(fit_mtl(tasks, MtlSpec{-1.0, 0.0}, SolveSettings{}),
                    std::invalid_argument);

    tasks.tasks[1].layout = SensorLayout{4, 1, {}};
    CHECK_THROWS_AS(fit_mtl(tasks, MtlSpec{0.1, 0.1}, SolveSettings{}),
                    std::invalid_argument);

    const TaskCollection ok = make_tasks(2, 20, layout, 43);
    Matrix wrong_shape = Matrix::Zero(4, 3);
    CHECK_THROWS_AS(
        mtl_objective(ok, MtlSpec{0.1, 0.1}, wrong_shape, Vector::Zero(3)),
        std::invalid_argument);
}
