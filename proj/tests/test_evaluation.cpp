#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gsvm/evaluation.hpp"
#include "gsvm/groups.hpp"
#include "gsvm/rng.hpp"
#include "support/oracles.hpp"

using namespace gsvm;

namespace {

Vector to_vector(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    int i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

LinearModel model_with_sensors(const SensorLayout& layout,
                               const std::vector<int>& active) {
    LinearModel model;
    model.w = Vector::Zero(layout.dim());
    for (int sensor : active) {
        model.w[sensor * layout.features_per_sensor] = 1.0;
    }
    return model;
}

}  // namespace

TEST_CASE("auc on pinned examples") {
    CHECK(auc(to_vector({0.9, 0.8, 0.1}), to_vector({1, 1, -1})) == 1.0);
    CHECK(auc(to_vector({0.5, 0.5, 0.5, 0.5}), to_vector({1, -1, 1, -1})) == 0.5);
    CHECK_THROWS_AS(auc(to_vector({1.0, 2.0}), to_vector({1, 1})),
                    std::invalid_argument);
}

TEST_CASE("auc matches pair counting exactly on random instances") {
    rng::Engine eng(3);
    rng::GaussianSampler gauss(eng);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 5 + static_cast<int>(rng::uniform_index(eng, 196));
        Vector scores(n), labels(n);
        bool pos = false, neg = false;
        for (int i = 0; i < n; ++i) {
            // Coarse quantization forces plenty of ties.
            scores[i] = std::round(gauss.next() * 4.0) / 4.0;
            labels[i] = rng::uniform01(eng) < 0.4 ? 1.0 : -1.0;
            (labels[i] > 0 ? pos : neg) = true;
        }
        if (!pos) labels[0] = 1.0;
        if (!neg) labels[n - 1] = -1.0;
        CHECK(auc(scores, labels) == oracle::auc_pair_oracle(scores, labels));
    }
}

TEST_CASE("auc is invariant under strictly increasing transforms and flips") {
    rng::Engine eng(7);
    rng::GaussianSampler gauss(eng);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 20 + static_cast<int>(rng::uniform_index(eng, 50));
        Vector scores(n), labels(n);
        for (int i = 0; i < n; ++i) {
            scores[i] = gauss.next();
            labels[i] = i % 3 == 0 ? 1.0 : -1.0;
        }
        const double base = auc(scores, labels);
        Vector transformed = scores;
        for (int i = 0; i < n; ++i) {
            transformed[i] = std::tanh(scores[i]) * 3.0 + 7.0;
        }
        CHECK(auc(transformed, labels) == base);
        CHECK(auc((-scores).eval(), labels) == doctest::Approx(1.0 - base).epsilon(1e-12));
    }
}

TEST_CASE("selection metrics reproduce the forced all-selected overlap") {
    const SensorLayout layout{16, 8, {}};
    std::vector<int> all(16);
    for (int i = 0; i < 16; ++i) all[i] = i;
    const LinearModel dense = model_with_sensors(layout, all);
    const std::vector<int> truth{0, 1, 2, 3, 4, 5, 6, 7};
    const EvalReport report = selection_metrics(dense, layout, truth);
    CHECK(report.selection_rate == 1.0);
    REQUIRE(report.f_measure.has_value());
    CHECK(*report.f_measure == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    const LinearModel exact = model_with_sensors(layout, truth);
    CHECK(*selection_metrics(exact, layout, truth).f_measure == 1.0);

    const LinearModel disjoint = model_with_sensors(layout, {8, 9, 10});
    CHECK(*selection_metrics(disjoint, layout, truth).f_measure == 0.0);
}

TEST_CASE("the selection F-measure is the harmonic mean of precision and recall") {
    rng::Engine eng(11);
    const SensorLayout layout{12, 2, {}};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> selected, truth;
        for (int s = 0; s < 12; ++s) {
            if (rng::uniform01(eng) < 0.4) selected.push_back(s);
            if (rng::uniform01(eng) < 0.4) truth.push_back(s);
        }
        if (selected.empty() || truth.empty()) continue;
        const LinearModel model = model_with_sensors(layout, selected);
        const EvalReport report = selection_metrics(model, layout, truth);

        double overlap = 0.0;
        for (int s : selected) {
            if (std::find(truth.begin(), truth.end(), s) != truth.end()) overlap += 1.0;
        }
        const double precision = overlap / selected.size();
        const double recall = overlap / truth.size();
        const double harmonic =
            (precision + recall) > 0.0
                ? 2.0 * precision * recall / (precision + recall)
                : 0.0;
        CHECK(*report.f_measure == doctest::Approx(harmonic).epsilon(1e-12));

        // Symmetry in the two sets.
        const LinearModel swapped = model_with_sensors(layout, truth);
        CHECK(*selection_metrics(swapped, layout, selected).f_measure ==
              doctest::Approx(*report.f_measure).epsilon(1e-12));
    }
}

TEST_CASE("wilcoxon pinned cases") {
    const std::vector<double> a{3.0, 1.0, 4.0, 1.0, 5.0, 9.0};
    CHECK(wilcoxon_signed_rank(a, a) == 1.0);

    const std::vector<double> b{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const std::vector<double> gains{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    CHECK(wilcoxon_signed_rank(gains, b) == 2.0 / 64.0);

    // Zeros keep their rank but leave the statistic: diffs (0, 1, -1, 2).
    const std::vector<double> pratt_a{1.0, 2.0, 0.0, 3.0};
    const std::vector<double> pratt_b{1.0, 1.0, 1.0, 1.0};
    CHECK(wilcoxon_signed_rank(pratt_a, pratt_b) == 0.75);

    CHECK_THROWS_AS(wilcoxon_signed_rank({1.0, 2.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("wilcoxon exact branch matches sign enumeration bit for bit") {
    rng::Engine eng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 5 + static_cast<int>(rng::uniform_index(eng, 8));  // 5..12
        std::vector<double> a(k), b(k);
        for (int i = 0; i < k; ++i) {
            // Integer-ish values create ties and zero differences.
            a[i] = static_cast<double>(rng::uniform_index(eng, 7)) * 0.5;
            b[i] = static_cast<double>(rng::uniform_index(eng, 7)) * 0.5;
        }
        const double library = wilcoxon_signed_rank(a, b);
        const double reference = oracle::wilcoxon_enumeration_oracle(a, b);
        CHECK(library == reference);
    }
}

TEST_CASE("wilcoxon p-value ignores a common shift") {
    rng::Engine eng(17);
    rng::GaussianSampler gauss(eng);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 6 + static_cast<int>(rng::uniform_index(eng, 10));
        std::vector<double> a(k), b(k), a2(k), b2(k);
        const double shift = gauss.next() * 10.0;
        for (int i = 0; i < k; ++i) {
            a[i] = gauss.next();
            b[i] = gauss.next();
            a2[i] = a[i] + shift;
            b2[i] = b[i] + shift;
        }
        CHECK(wilcoxon_signed_rank(a, b) == wilcoxon_signed_rank(a2, b2));
    }
}

TEST_CASE("the normal branch behaves sensibly for larger samples") {
    rng::Engine eng(19);
    rng::GaussianSampler gauss(eng);
    std::vector<double> a(30), b(30);
    for (int i = 0; i < 30; ++i) {
        a[i] = gauss.next() + 2.0;  // strong positive shift
        b[i] = gauss.next();
    }
    const double strong = wilcoxon_signed_rank(a, b);
    CHECK(strong < 1e-4);

    for (int i = 0; i < 30; ++i) a[i] = b[i];
    CHECK(wilcoxon_signed_rank(a, b) == 1.0);

    // Approximation quality near the exact cutoff.
    std::vector<double> c(13), d(13);
    for (int i = 0; i < 13; ++i) {
        c[i] = gauss.next();
        d[i] = gauss.next();
    }
    const double approx = wilcoxon_signed_rank(c, d);
    const double exact = oracle::wilcoxon_enumeration_oracle(c, d);
    CHECK(std::abs(approx - exact) < 0.05);
}

TEST_CASE("selection frequency counts runs per sensor") {
    const SensorLayout layout{4, 2, {}};
    std::vector<LinearModel> models;
    for (int i = 0; i < 10; ++i) models.push_back(model_with_sensors(layout, {0}));
    CHECK(selection_frequency(models, layout) == std::vector<int>{10, 0, 0, 0});
    CHECK(selection_frequency({}, layout) == std::vector<int>{0, 0, 0, 0});
}
