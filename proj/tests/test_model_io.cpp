#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "evifuse/errors.hpp"
#include "evifuse/model_io.hpp"

using namespace evifuse;

namespace {

EnsembleClassifier four_kind_ensemble() {
    const Dataset data = synth_clusters(3, 5, 40, 3.0, 11);
    const FramePtr frame = make_frame({0, 1, 2});
    std::vector<ClassifierSpec> specs(4);
    specs[0].kind = ClassifierKind::knn;
    specs[0].n_neighbors = 3;
    specs[0].metric = KnnMetric::manhattan;
    specs[0].weighting = KnnWeighting::distance;
    specs[1].kind = ClassifierKind::decision_tree;
    specs[1].max_depth = 6;
    specs[1].criterion = TreeCriterion::entropy;
    specs[2].kind = ClassifierKind::gaussian_nb;
    specs[3].kind = ClassifierKind::ada_boost_stumps;
    specs[3].n_estimators = 15;
    specs[3].learning_rate = 0.5;
    return train_ensemble(specs, data, frame, 0.9, k_factor(4));
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("model io") {
    TEST_CASE("round-trip preserves every prediction and uncertainty") {
        const EnsembleClassifier original = four_kind_ensemble();
        const TempFile file("/tmp/evifuse_model_roundtrip.json");
        save_ensemble(original, file.path);

        const EnsembleClassifier loaded = load_ensemble(file.path);
        CHECK(*loaded.frame == *original.frame);
        CHECK(loaded.k.f == original.k.f);
        CHECK(loaded.k.k == original.k.k);
        REQUIRE(loaded.members.size() == original.members.size());
        for (std::size_t i = 0; i < loaded.members.size(); ++i) {
            CHECK(loaded.members[i].spec().describe() ==
                  original.members[i].spec().describe());
            CHECK(loaded.weights[i].values() == original.weights[i].values());
        }

        const Dataset probe = synth_clusters(3, 5, 25, 3.0, 99);
        for (const auto& row : probe.features) {
            const EnsembleVerdict a = ec_infer(original, row);
            const EnsembleVerdict b = ec_infer(loaded, row);
            CHECK(a.y_ec == b.y_ec);
            CHECK(a.u_d == b.u_d);  // bitwise: doubles round-trip exactly
            CHECK(a.u_y == b.u_y);
            CHECK(a.member_predictions == b.member_predictions);
        }

        // Serialization is a fixed point: dumping the loaded model gives the
        // same bytes.
        CHECK(ensemble_to_json(loaded) == ensemble_to_json(original));
    }

    TEST_CASE("file carries the format tag") {
        const std::string text = ensemble_to_json(four_kind_ensemble());
        CHECK(text.find("EVIFUSE-MODEL-v1") != std::string::npos);
    }

    TEST_CASE("wrong magic, bad JSON, and missing pieces are rejected") {
        const EnsembleClassifier ec = four_kind_ensemble();
        std::string text = ensemble_to_json(ec);

        CHECK_THROWS_AS(ensemble_from_json("not json at all {"), ParseError);

        std::string wrong = text;
        wrong.replace(wrong.find("EVIFUSE-MODEL-v1"), 16, "EVIFUSE-MODEL-v9");
        CHECK_THROWS_AS(ensemble_from_json(wrong), ParseError);

        CHECK_THROWS_AS(ensemble_from_json(R"({"format":"EVIFUSE-MODEL-v1"})"), ParseError);
    }

    TEST_CASE("inconsistent weight table is rejected") {
        const EnsembleClassifier ec = four_kind_ensemble();
        std::string text = ensemble_to_json(ec);
        // Drop the final weight row: "weights": [...] is the last key; remove
        // one row by replacing the first row-with-comma occurrence.
        const std::string row = "[\n    [";
        auto pos = text.find("\"weights\": [");
        REQUIRE(pos != std::string::npos);
        auto first_row_start = text.find('[', pos + 12);
        auto first_row_end = text.find(']', first_row_start);
        auto comma = text.find(',', first_row_end);
        REQUIRE(comma != std::string::npos);
        text.erase(first_row_start, comma - first_row_start + 1);
        CHECK_THROWS_AS(ensemble_from_json(text), ParseError);
    }

    TEST_CASE("missing file") {
        CHECK_THROWS_AS(load_ensemble("/tmp/evifuse_no_such_model.json"), FileNotFoundError);
    }
}
