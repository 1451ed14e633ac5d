#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gsvm/groups.hpp"
#include "gsvm/io.hpp"
#include "gsvm/rng.hpp"
#include "gsvm/trial_set.hpp"

using namespace gsvm;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "gsvm_data_model_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("load_trialset parses a consistent file") {
    const fs::path trials = temp_dir() / "ok.csv";
    const fs::path layout = temp_dir() / "ok_layout.json";
    write_file(trials,
               "f0,f1,f2,f3,f4,f5,label\n"
               "0.5,-1.25,3,0,2e-3,7,1\n"
               "1,2,3,4,5,6,-1\n"
               "0.1,0.2,0.3,0.4,0.5,0.6,1\n");
    write_file(layout, "{\"p\": 2, \"r\": 3}\n");

    const TrialSet data = load_trialset(trials.string(), layout.string());
    CHECK(data.n() == 3);
    CHECK(data.dim() == 6);
    CHECK(data.labels[0] == 1.0);
    CHECK(data.labels[1] == -1.0);
    CHECK(data.features(0, 4) == 2e-3);
}

TEST_CASE("load_trialset rejects a layout that disagrees with the columns") {
    const fs::path trials = temp_dir() / "mismatch.csv";
    const fs::path layout = temp_dir() / "mismatch_layout.json";
    write_file(trials, "f0,f1,f2,f3,f4,f5,label\n1,2,3,4,5,6,1\n");
    write_file(layout, "{\"p\": 2, \"r\": 2}\n");
    CHECK_THROWS_WITH_AS(load_trialset(trials.string(), layout.string()),
                         doctest::Contains("layout mismatch"), std::runtime_error);
}

TEST_CASE("load_trialset rejects out-of-domain labels") {
    const fs::path trials = temp_dir() / "label0.csv";
    write_file(trials, "f0,f1,label\n1,2,0\n");
    CHECK_THROWS_WITH_AS(load_trials_csv(trials.string(), SensorLayout{1, 2, {}}),
                         doctest::Contains("label must be -1 or +1"),
                         std::runtime_error);
}

TEST_CASE("load_trialset reports malformed rows and non-finite values") {
    const fs::path short_row = temp_dir() / "short.csv";
    write_file(short_row, "f0,f1,label\n1,2,1\n1,1\n");
    CHECK_THROWS_WITH_AS(load_trials_csv(short_row.string(), SensorLayout{1, 2, {}}),
                         doctest::Contains("malformed row"), std::runtime_error);

    const fs::path huge = temp_dir() / "huge.csv";
    write_file(huge, "f0,f1,label\n1e999,2,1\n");
    CHECK_THROWS_WITH_AS(load_trials_csv(huge.string(), SensorLayout{1, 2, {}}),
                         doctest::Contains("non-finite"), std::runtime_error);

    const fs::path garbage = temp_dir() / "garbage.csv";
    write_file(garbage, "f0,f1,label\nabc,2,1\n");
    CHECK_THROWS_AS(load_trials_csv(garbage.string(), SensorLayout{1, 2, {}}),
                    std::runtime_error);
}

TEST_CASE("sensor_groups builds contiguous per-sensor blocks") {
    const GroupPartition two = sensor_groups(SensorLayout{2, 3, {}});
    REQUIRE(two.size() == 2);
    CHECK(two.groups[0].indices == std::vector<int>{0, 1, 2});
    CHECK(two.groups[1].indices == std::vector<int>{3, 4, 5});
    CHECK(two.groups[0].weight == 1.0);

    const GroupPartition paper = sensor_groups(SensorLayout{32, 8, {}});
    CHECK(paper.size() == 32);
    CHECK(paper.dim == 256);
    int covered = 0;
    for (const Group& g : paper.groups) covered += static_cast<int>(g.indices.size());
    CHECK(covered == 256);

    const GroupPartition single = sensor_groups(SensorLayout{1, 4, {}});
    REQUIRE(single.size() == 1);
    CHECK(single.groups[0].indices == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("sensor_groups is a partition for every small layout") {
    for (int p = 1; p <= 64; ++p) {
        for (int r = 1; r <= 64; ++r) {
            const GroupPartition part = sensor_groups(SensorLayout{p, r, {}});
            REQUIRE_NOTHROW(part.validate());
            REQUIRE(part.size() == p);
        }
    }
}

TEST_CASE("build_mtl_groups stacks sensor blocks across tasks") {
    const GroupPartition stacked = build_mtl_groups(SensorLayout{2, 2, {}}, 2);
    REQUIRE(stacked.size() == 2);
    CHECK(stacked.dim == 8);
    CHECK(stacked.groups[0].indices == std::vector<int>{0, 1, 4, 5});
    CHECK(stacked.groups[1].indices == std::vector<int>{2, 3, 6, 7});

    const GroupPartition wide = build_mtl_groups(SensorLayout{16, 8, {}}, 3);
    CHECK(wide.size() == 16);
    for (const Group& g : wide.groups) CHECK(g.indices.size() == 24);
    REQUIRE_NOTHROW(wide.validate());
}

TEST_CASE("build_mtl_groups with one task equals sensor_groups") {
    for (int p : {1, 3, 7}) {
        for (int r : {1, 2, 5}) {
            const GroupPartition a = sensor_groups(SensorLayout{p, r, {}});
            const GroupPartition b = build_mtl_groups(SensorLayout{p, r, {}}, 1);
            REQUIRE(a.size() == b.size());
            CHECK(a.dim == b.dim);
            for (int g = 0; g < a.size(); ++g) {
                CHECK(a.groups[g].indices == b.groups[g].indices);
            }
        }
    }
}

TEST_CASE("model save/load round-trips w and b exactly") {
    rng::Engine eng(11);
    rng::GaussianSampler gauss(eng);
    LinearModel model;
    model.w.resize(17);
    for (int i = 0; i < 17; ++i) model.w[i] = gauss.next() * std::pow(10.0, i - 8);
    model.b = gauss.next();
    model.regularizer = RegularizerSpec{RegKind::GroupLq, 1.4, 0.125};
    model.selected_groups = {0, 2, 5};
    model.diagnostics.iterations = 42;
    model.diagnostics.objective_trace = {3.5, 1.25};

    const fs::path path = temp_dir() / "model.json";
    save_model(model, path.string());
    const LinearModel loaded = load_model(path.string());

    REQUIRE(loaded.w.size() == model.w.size());
    for (int i = 0; i < 17; ++i) CHECK(loaded.w[i] == model.w[i]);
    CHECK(loaded.b == model.b);
    CHECK(loaded.regularizer.kind == RegKind::GroupLq);
    CHECK(loaded.regularizer.q == 1.4);
    CHECK(loaded.regularizer.lambda == 0.125);
    CHECK(loaded.selected_groups == model.selected_groups);
}

TEST_CASE("model file without a bias is a schema error") {
    const fs::path path = temp_dir() / "nobias.json";
    write_file(path,
               "{\"schema_version\":1,\"w\":[1,2],"
               "\"regularizer\":{\"kind\":\"l1\",\"q\":2,\"lambda\":1}}\n");
    CHECK_THROWS_WITH_AS(load_model(path.string()),
                         doctest::Contains("missing field 'b'"), std::runtime_error);

    const fs::path versioned = temp_dir() / "badversion.json";
    write_file(versioned,
               "{\"schema_version\":7,\"w\":[1],\"b\":0,"
               "\"regularizer\":{\"kind\":\"l1\",\"q\":2,\"lambda\":1}}\n");
    CHECK_THROWS_WITH_AS(load_model(versioned.string()),
                         doctest::Contains("schema version"), std::runtime_error);
}

TEST_CASE("a 256-dimensional model matches the 32x8 layout") {
    LinearModel model;
    model.w = Vector::Zero(256);
    model.w[5] = 1.0;
    model.b = 0.25;
    const fs::path path = temp_dir() / "d256.json";
    save_model(model, path.string());
    const LinearModel loaded = load_model(path.string());
    CHECK(loaded.w.size() == SensorLayout{32, 8, {}}.dim());
}

TEST_CASE("trial CSV round-trip preserves every value exactly") {
    rng::Engine eng(99);
    rng::GaussianSampler gauss(eng);
    TrialSet data;
    data.layout = SensorLayout{3, 4, {}};
    data.features.resize(20, 12);
    data.labels.resize(20);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 12; ++j) {
            data.features(i, j) = gauss.next() * std::pow(10.0, (i + j) % 17 - 8);
        }
        data.labels[i] = (i % 3 == 0) ? 1.0 : -1.0;
    }
    const fs::path path = temp_dir() / "roundtrip.csv";
    save_trials_csv(data, path.string());
    const TrialSet loaded = load_trials_csv(path.string(), data.layout);
    REQUIRE(loaded.n() == data.n());
    for (int i = 0; i < 20; ++i) {
        CHECK(loaded.labels[i] == data.labels[i]);
        for (int j = 0; j < 12; ++j) {
            CHECK(loaded.features(i, j) == data.features(i, j));
        }
    }
}

TEST_CASE("validation rejects broken inputs") {
    TrialSet data;
    data.layout = SensorLayout{1, 2, {}};
    data.features.resize(2, 2);
    data.features << 1, 2, 3, 4;
    data.labels.resize(2);
    data.labels << 1, 2;  // 2 is not a class mark
    CHECK_THROWS_AS(data.validate(), std::invalid_argument);

    data.labels << 1, -1;
    CHECK_NOTHROW(data.validate());

    data.features(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(data.validate(), std::invalid_argument);

    GroupPartition bad;
    bad.dim = 3;
    bad.groups.push_back(Group{{0, 1}, 1.0, false});
    bad.groups.push_back(Group{{1, 2}, 1.0, false});  // overlap
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    TaskCollection tasks;
    tasks.tasks.push_back(data);
    TrialSet other = data;
    other.layout = SensorLayout{2, 1, {}};
    tasks.tasks.push_back(other);
    CHECK_THROWS_AS(tasks.validate(), std::invalid_argument);
}
