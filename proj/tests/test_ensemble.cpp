#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "evifuse/classifiers.hpp"
#include "evifuse/dataset.hpp"
#include "evifuse/ensemble.hpp"
#include "evifuse/errors.hpp"

using namespace evifuse;

namespace {

std::vector<ConfidenceWeights> uniform_weights(const FramePtr& frame, std::size_t n,
                                               double w = 1.0) {
    return std::vector<ConfidenceWeights>(n, ConfidenceWeights::uniform(frame, w));
}

EnsembleClassifier small_trained_ensemble(const Dataset& train_set, const FramePtr& frame,
                                          double member_weight = 1.0) {
    std::vector<ClassifierSpec> specs(3);
    specs[0].kind = ClassifierKind::knn;
    specs[0].n_neighbors = 3;
    specs[1].kind = ClassifierKind::decision_tree;
    specs[1].max_depth = 6;
    specs[2].kind = ClassifierKind::gaussian_nb;
    return train_ensemble(specs, train_set, frame, member_weight, k_factor(4));
}

}  // namespace

TEST_SUITE("ensemble") {
    TEST_CASE("unanimous members collapse both uncertainties") {
        const FramePtr frame = make_frame({1, 2, 3});
        const std::vector<int> preds{2, 2, 2};
        const auto w = uniform_weights(frame, 3);
        const EnsembleVerdict v = fuse_predictions(preds, w, k_factor(4), frame);
        CHECK(v.y_ec == 2);
        CHECK(v.u_d == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(v.u_y == doctest::Approx(0.0).scale(1).epsilon(1e-3));
        CHECK(v.member_predictions == preds);
    }

    TEST_CASE("two-against-one split: frozen hand-folded trace") {
        // Members vote (1, 2, 1) on a two-class frame, full weights, k=0.9999.
        // Hand fold, Dempster: step 1 normalizes a 0.9998 conflict into a
        // dead-even [0.5, 0.5]; step 2 restores near-certainty on label 1
        // and frame mass stays exactly 0. Yager instead parks the step-2
        // cross products 2*(0.00009999*0.5...) -> 0.00009999 on the frame.
        const FramePtr frame = make_frame({1, 2});
        const std::vector<int> preds{1, 2, 1};
        const auto w = uniform_weights(frame, 3);
        const EnsembleVerdict v = fuse_predictions(preds, w, k_factor(4), frame);

        CHECK(v.y_ec == 1);
        CHECK(v.u_d == doctest::Approx(0.0).scale(1).epsilon(1e-12));
        CHECK(v.u_y == doctest::Approx(0.00009999).scale(1).epsilon(1e-9));
        CHECK(v.u_y > v.u_d);
        CHECK(v.fused_mass.singleton(0) == doctest::Approx(0.9999).epsilon(1e-9));
    }

    TEST_CASE("two-member total disagreement: Yager uncertainty near one") {
        const FramePtr frame = make_frame({4, 9});
        const std::vector<int> preds{4, 9};
        const auto w = uniform_weights(frame, 2);
        const EnsembleVerdict v = fuse_predictions(preds, w, k_factor(4), frame);

        CHECK(v.y_ec == 4);  // symmetric fusion, tie to the lowest index
        CHECK(v.u_y == doctest::Approx(0.99980002).scale(1).epsilon(1e-9));
        CHECK(v.conflict_dempster == doctest::Approx(0.99980002).scale(1).epsilon(1e-9));
    }

    TEST_CASE("strict majority of equally weighted members wins") {
        std::mt19937_64 rng(77);
        for (int trial = 0; trial < 300; ++trial) {
            const int n_classes = 2 + static_cast<int>(rng() % 4);
            std::vector<int> labels(static_cast<std::size_t>(n_classes));
            for (int c = 0; c < n_classes; ++c) labels[static_cast<std::size_t>(c)] = c + 10;
            const FramePtr frame = make_frame(labels);

            const std::size_t n_members = 3 + rng() % 5;
            std::vector<int> preds(n_members);
            for (int& p : preds) p = labels[rng() % labels.size()];

            std::vector<std::size_t> counts(labels.size(), 0);
            for (int p : preds) ++counts[static_cast<std::size_t>(p - 10)];
            std::size_t top = 0, runner = 0;
            int top_label = labels[0];
            for (std::size_t c = 0; c < counts.size(); ++c) {
                if (counts[c] > top) {
                    runner = top;
                    top = counts[c];
                    top_label = labels[c];
                } else if (counts[c] > runner) {
                    runner = counts[c];
                }
            }
            if (top == runner) continue;  // no strict majority winner

            const auto w = uniform_weights(frame, n_members);
            const EnsembleVerdict v = fuse_predictions(preds, w, k_factor(4), frame);
            CAPTURE(trial);
            CHECK(v.y_ec == top_label);
        }
    }

    TEST_CASE("dempster uncertainty never exceeds yager with uniform weights") {
        std::mt19937_64 rng(123);
        for (int trial = 0; trial < 300; ++trial) {
            const FramePtr frame = make_frame({0, 1, 2, 3});
            const std::size_t n_members = 2 + rng() % 6;
            std::vector<int> preds(n_members);
            for (int& p : preds) p = static_cast<int>(rng() % 4);
            const double weight = 0.5 + 0.5 * static_cast<double>(rng() % 1000) / 1000.0;
            const auto w = uniform_weights(frame, n_members, weight);
            const EnsembleVerdict v = fuse_predictions(preds, w, k_factor(4), frame);
            CHECK(v.u_d <= v.u_y + 1e-12);
        }
    }

    TEST_CASE("member order permutation keeps the dempster decision") {
        const FramePtr frame = make_frame({0, 1, 2});
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<int> preds(5);
            for (int& p : preds) p = static_cast<int>(rng() % 3);
            const auto w = uniform_weights(frame, preds.size(), 0.9);
            const EnsembleVerdict a = fuse_predictions(preds, w, k_factor(4), frame);

            // Reverse is as good as any permutation for the property.
            std::vector<int> reversed(preds.rbegin(), preds.rend());
            const EnsembleVerdict b = fuse_predictions(reversed, w, k_factor(4), frame);
            for (std::size_t c = 0; c < 3; ++c)
                CHECK(a.fused_mass.singleton(c) ==
                      doctest::Approx(b.fused_mass.singleton(c)).scale(1).epsilon(1e-9));
            CHECK(a.u_d == doctest::Approx(b.u_d).scale(1).epsilon(1e-9));

            // An exactly tied vote (e.g. 2/2/1) leaves the fused mass
            // symmetric, and the argmax then hangs on rounding noise; only a
            // decisive margin makes the label order-independent.
            std::vector<double> sorted = a.fused_mass.singletons();
            std::sort(sorted.begin(), sorted.end());
            const double margin = sorted[2] - sorted[1];
            if (margin > 1e-9) CHECK(a.y_ec == b.y_ec);
        }
    }

    TEST_CASE("window: constant stream is invariant in both modes") {
        const FramePtr frame = make_frame({3, 7});
        for (WindowMode mode : {WindowMode::majority, WindowMode::literal_mean}) {
            PredictionWindow window(4, mode, frame);
            for (int i = 0; i < 10; ++i) CHECK(window.push(7) == 7);
        }
    }

    TEST_CASE("window: worked five-slot example in both modes") {
        const FramePtr frame = make_frame({1, 7});
        // Buffer after five pushes is [1,1,1,7,7].
        PredictionWindow majority(4, WindowMode::majority, frame);
        int smoothed = 0;
        for (int label : {1, 1, 1, 7, 7}) smoothed = majority.push(label);
        CHECK(smoothed == 1);

        PredictionWindow literal(4, WindowMode::literal_mean, frame);
        for (int label : {1, 1, 1, 7, 7}) smoothed = literal.push(label);
        // mean 3.4; |3.4-1| = 2.4 < |3.4-7| = 3.6
        CHECK(smoothed == 1);
    }

    TEST_CASE("window: zero capacity is the identity") {
        const FramePtr frame = make_frame({2, 5});
        PredictionWindow window(0, WindowMode::majority, frame);
        for (int label : {2, 5, 2, 2, 5}) CHECK(window.push(label) == label);
    }

    TEST_CASE("window: majority ties go to the most recent occupant") {
        const FramePtr frame = make_frame({1, 2});
        PredictionWindow window(3, WindowMode::majority, frame);
        window.push(1);
        window.push(1);
        window.push(2);
        CHECK(window.push(2) == 2);  // [1,1,2,2]: tie, 2 pushed last
    }

    TEST_CASE("window: literal mean snaps equidistant means to the smaller label") {
        const FramePtr frame = make_frame({1, 3});
        PredictionWindow window(1, WindowMode::literal_mean, frame);
        window.push(1);
        CHECK(window.push(3) == 1);  // mean 2.0 equidistant from 1 and 3
    }

    TEST_CASE("window buffer never exceeds capacity plus one") {
        const FramePtr frame = make_frame({0, 1});
        PredictionWindow window(2, WindowMode::majority, frame);
        for (int i = 0; i < 9; ++i) {
            window.push(i % 2);
            CHECK(window.buffer().size() <= 3);
        }
    }

    TEST_CASE("stream with zero window equals per-row inference") {
        const Dataset all = synth_clusters(3, 6, 40, 3.0, 2);
        const FramePtr frame = make_frame({0, 1, 2});
        const EnsembleClassifier ec = small_trained_ensemble(all, frame);

        const StreamResult stream = ec_infer_stream(ec, all, 0);
        REQUIRE(stream.verdicts.size() == all.rows());
        for (std::size_t i = 0; i < all.rows(); ++i) {
            const EnsembleVerdict row = ec_infer(ec, all.features[i]);
            CHECK(stream.verdicts[i].y_ec == row.y_ec);
            CHECK(stream.smoothed_labels[i] == row.y_ec);
        }
    }

    TEST_CASE("windowing removes an isolated spike inside a constant run") {
        // Build a stream of class-0 rows with one class-1 row in the middle.
        const Dataset all = synth_clusters(2, 6, 60, 5.0, 8);
        const FramePtr frame = make_frame({0, 1});
        const EnsembleClassifier ec = small_trained_ensemble(all, frame);

        Dataset stream_data = filter_labels(all, {0});
        const Dataset spikes = filter_labels(all, {1});
        stream_data.features.insert(stream_data.features.begin() + 30, spikes.features[0]);
        stream_data.labels.insert(stream_data.labels.begin() + 30, 1);

        const StreamResult raw = ec_infer_stream(ec, stream_data, 0);
        const StreamResult smoothed = ec_infer_stream(ec, stream_data, 20);
        CHECK(raw.verdicts[30].y_ec == 1);  // the spike is really predicted 1
        for (int label : smoothed.smoothed_labels) CHECK(label == 0);
    }

    TEST_CASE("windowed output lags a step change by at most the window size") {
        const Dataset all = synth_clusters(2, 6, 50, 5.0, 4);
        const FramePtr frame = make_frame({0, 1});
        const EnsembleClassifier ec = small_trained_ensemble(all, frame);

        // 40 class-0 rows then 40 class-1 rows.
        const Dataset zeros = filter_labels(all, {0});
        const Dataset ones = filter_labels(all, {1});
        Dataset stream_data;
        for (int i = 0; i < 40; ++i) {
            stream_data.features.push_back(zeros.features[static_cast<std::size_t>(i)]);
            stream_data.labels.push_back(0);
        }
        for (int i = 0; i < 40; ++i) {
            stream_data.features.push_back(ones.features[static_cast<std::size_t>(i)]);
            stream_data.labels.push_back(1);
        }

        const std::size_t n_w = 10;
        const StreamResult res = ec_infer_stream(ec, stream_data, n_w);
        std::size_t transition = 0;
        for (std::size_t i = 0; i < res.smoothed_labels.size(); ++i)
            if (res.smoothed_labels[i] == 1) {
                transition = i;
                break;
            }
        CHECK(transition >= 40);
        CHECK(transition <= 40 + n_w);
        CHECK(res.smoothed_labels.back() == 1);  // it does switch eventually
    }

    TEST_CASE("assembly validation") {
        const Dataset all = synth_clusters(2, 4, 30, 4.0, 1);
        const FramePtr frame = make_frame({0, 1});
        ClassifierSpec spec;
        spec.kind = ClassifierKind::gaussian_nb;
        std::vector<ClassifierModel> one{train(spec, all, frame)};
        CHECK_THROWS_AS(make_ensemble(std::move(one), uniform_weights(frame, 1), k_factor(4)),
                        EmptyListError);

        std::vector<ClassifierModel> two{train(spec, all, frame), train(spec, all, frame)};
        CHECK_THROWS_AS(make_ensemble(std::move(two), uniform_weights(frame, 3), k_factor(4)),
                        LengthMismatchError);

        CHECK_THROWS_AS(
            fuse_predictions(std::vector<int>{0, 1}, uniform_weights(frame, 1), k_factor(4),
                             frame),
            LengthMismatchError);
    }
}
