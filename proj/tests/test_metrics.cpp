#include <doctest.h>

#include <vector>

#include "evifuse/errors.hpp"
#include "evifuse/frame.hpp"
#include "evifuse/metrics.hpp"

using evifuse::compute_metrics;
using evifuse::Frame;

TEST_CASE("perfect predictions score 1 everywhere") {
    const Frame frame({1, 2, 3});
    const std::vector<int> truth{1, 2, 3, 1, 2, 3};
    const auto r = compute_metrics(truth, truth, frame);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(r.f1[c] == doctest::Approx(1.0));
        CHECK(r.recall[c] == doctest::Approx(1.0));
    }
    CHECK(r.macro_f1 == doctest::Approx(1.0));
}

TEST_CASE("a class with TP=8 FP=2 FN=2 lands at F1 0.8") {
    const Frame frame({1, 2});
    std::vector<int> truth, pred;
    for (int i = 0; i < 8; ++i) {  // true positives for class 1
        truth.push_back(1);
        pred.push_back(1);
    }
    for (int i = 0; i < 2; ++i) {  // false positives: truth 2, predicted 1
        truth.push_back(2);
        pred.push_back(1);
    }
    for (int i = 0; i < 2; ++i) {  // false negatives: truth 1, predicted 2
        truth.push_back(1);
        pred.push_back(2);
    }
    const auto r = compute_metrics(truth, pred, frame);
    CHECK(r.f1[0] == doctest::Approx(0.8));
    CHECK(r.precision[0] == doctest::Approx(0.8));
    CHECK(r.recall[0] == doctest::Approx(0.8));
}

TEST_CASE("a class never predicted gets zero F1 and zero detection rate") {
    const Frame frame({1, 2});
    const std::vector<int> truth{1, 1, 2, 2};
    const std::vector<int> pred{1, 1, 1, 1};
    const auto r = compute_metrics(truth, pred, frame);
    CHECK(r.f1[1] == 0.0);
    CHECK(r.recall[1] == 0.0);
    // class 1: precision 0.5, recall 1.0 -> F1 = 2/3; class 2 contributes 0
    CHECK(r.macro_f1 == doctest::Approx((2.0 / 3.0) / 2.0));
}

TEST_CASE("macro F1 averages only classes present in the truth") {
    const Frame frame({1, 2, 3});
    const std::vector<int> truth{1, 1, 2, 2};  // class 3 absent
    const std::vector<int> pred{1, 1, 2, 2};
    const auto r = compute_metrics(truth, pred, frame);
    CHECK(r.macro_f1 == doctest::Approx(1.0));
}

TEST_CASE("labels beyond the frame (fresh anomaly) are folded into the report") {
    const Frame frame({0, 1});
    const std::vector<int> truth{0, 1, 30, 30};
    const std::vector<int> pred{0, 1, 30, 1};
    const auto r = compute_metrics(truth, pred, frame);
    REQUIRE(r.labels == std::vector<int>{0, 1, 30});
    CHECK(r.support[2] == 2);
    CHECK(r.recall[2] == doctest::Approx(0.5));
    CHECK(r.confusion[2][1] == 1);
}

TEST_CASE("confusion rows sum to the class support") {
    const Frame frame({1, 2, 3});
    const std::vector<int> truth{1, 2, 3, 1, 2, 3, 1};
    const std::vector<int> pred{1, 3, 2, 2, 2, 3, 1};
    const auto r = compute_metrics(truth, pred, frame);
    for (std::size_t t = 0; t < r.labels.size(); ++t) {
        std::size_t row_sum = 0;
        for (std::size_t p = 0; p < r.labels.size(); ++p) row_sum += r.confusion[t][p];
        CHECK(row_sum == r.support[t]);
    }
}

TEST_CASE("length mismatches are rejected") {
    const Frame frame({1, 2});
    const std::vector<int> truth{1, 2};
    const std::vector<int> pred{1};
    CHECK_THROWS_AS(compute_metrics(truth, pred, frame), evifuse::LengthMismatchError);
}

TEST_CASE("uncertainty traces summarize per true class") {
    const Frame frame({1, 2});
    const std::vector<int> truth{1, 1, 2};
    const std::vector<int> pred{1, 1, 2};
    const std::vector<double> u_d{0.1, 0.3, 0.8};
    const std::vector<double> u_y{0.2, 0.4, 0.9};
    const auto r = compute_metrics(truth, pred, frame, u_d, u_y);
    REQUIRE(r.uncertainty.has_value());
    CHECK(r.uncertainty->mean_u_d[0] == doctest::Approx(0.2));
    CHECK(r.uncertainty->max_u_d[0] == doctest::Approx(0.3));
    CHECK(r.uncertainty->mean_u_y[1] == doctest::Approx(0.9));
    CHECK(r.uncertainty->max_u_y[1] == doctest::Approx(0.9));
}

TEST_CASE("csv rendering is stable and carries the macro row") {
    const Frame frame({1, 2});
    const std::vector<int> truth{1, 2};
    const auto r = compute_metrics(truth, truth, frame);
    const auto csv = evifuse::metrics_to_csv(r);
    CHECK(csv.find("label,support,precision,recall,f1\n") == 0);
    CHECK(csv.find("macro_f1,1.000000\n") != std::string::npos);
    CHECK(evifuse::metrics_to_csv(r) == csv);
}
