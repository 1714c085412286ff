#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mtsf/forecast_family.hpp"
#include "mtsf/rolling_cv.hpp"
#include "mtsf/seed.hpp"

using namespace mtsf;

namespace {

std::string golden(const std::string& name) {
    std::ifstream in(std::string(MTSF_GOLDEN_DIR) + "/" + name);
    REQUIRE(in);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_count(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) {
        n += c == '\n';
    }
    return n;
}

// Fixed per-fold errors, no fitting.
class ScriptedFamily final : public ForecastFamily {
public:
    std::string name() const override { return "scripted"; }
    Scheme scheme() const override { return Scheme::MatrixFullWindow; }
    HyperGrid default_grid() const override { return {}; }

protected:
    RowVector fit_predict(const Matrix&, const Fold& fold, const Assignment& theta, std::uint64_t) const override {
        // actual row is all ones; sMAPE of prediction q is 2|1-q|/(1+q)
        const double e = theta.get_string("point", "A") == "A" ? (fold.index == 1 ? 0.2 : 0.4) : 0.3;
        return RowVector::Constant(1, (2.0 - e) / (2.0 + e));
    }
};

} // namespace

TEST_CASE("fold plans match hand enumeration") {
    const SplitConfig base{10, 8, std::nullopt};
    const SplitConfig win{10, 8, 3};
    CHECK(plan_matrix_pairs(base).dump() == golden("matrix-pairs_L10_T8.txt"));
    CHECK(plan_matrix_full_window(base).dump() == golden("matrix-full-window_L10_T8.txt"));
    CHECK(plan_multidim_window(win).dump() == golden("multidim-window_L10_T8_S3.txt"));
    CHECK(plan_matrix_list(win).dump() == golden("matrix-list_L10_T8_S3.txt"));

    const auto pairs = plan_matrix_pairs(base);
    REQUIRE(pairs.folds.size() == 2);
    CHECK(pairs.folds[0].training.front() == SamplePair{{1, 7}, RowRange{8, 8}});
    CHECK(pairs.folds[1].target_row == 10);

    const auto multi = plan_multidim_window(win);
    CHECK(multi.folds[0].training.size() == 5);
    CHECK(multi.folds[0].training.back() == SamplePair{{5, 7}, RowRange{8, 8}});
    CHECK(multi.folds[0].validation_input.input == RowRange{6, 8});

    const auto list = plan_matrix_list(win);
    CHECK(list.folds[0].validation_input == SamplePair{{5, 7}, RowRange{6, 8}});
    CHECK(list.folds[1].validation_input == SamplePair{{6, 8}, RowRange{7, 9}});
}

TEST_CASE("plan edge cases") {
    CHECK(plan_matrix_pairs({9, 8, std::nullopt}).folds.size() == 1);
    CHECK_THROWS_AS(plan_matrix_pairs({10, 1, std::nullopt}), ConfigError);
    const auto single = plan_matrix_full_window({9, 8, std::nullopt});
    REQUIRE(single.folds.size() == 1);
    CHECK(single.folds[0].training.front().input == RowRange{1, 8});
    CHECK(single.folds[0].target_row == 9);
    CHECK_THROWS_AS(plan_matrix_full_window({10, 10, std::nullopt}), ConfigError);

    CHECK(plan_multidim_window({10, 8, 7}).folds[0].training.size() == 1);
    CHECK_THROWS_AS(plan_multidim_window({10, 8, 8}), ConfigError);
    CHECK_THROWS_AS(plan_multidim_window({10, 8, std::nullopt}), ConfigError);
    CHECK(plan_matrix_list({9, 8, 3}).folds.size() == 1);
    const auto s1 = plan_matrix_list({10, 8, 1});
    CHECK(s1.folds[0].training.size() == 7);
    CHECK(s1.folds[0].training[0] == SamplePair{{1, 1}, RowRange{2, 2}});
}

TEST_CASE("standard operating points") {
    for (auto [l, tr, v] : {std::tuple{40u, 32u, 8u}, std::tuple{90u, 72u, 18u}}) {
        const auto cfg = SplitConfig::from_fraction(l, 0.8, 4);
        CHECK(cfg.train_length == tr);
        CHECK(cfg.validation_length() == v);
        for (auto scheme : {Scheme::MatrixPairs, Scheme::MatrixFullWindow, Scheme::MultiDimWindow, Scheme::MatrixList}) {
            const auto plan = make_plan(scheme, cfg);
            CHECK(plan.folds.size() == v);
            CHECK(line_count(plan.dump()) == v);
        }
    }
}

TEST_CASE("folds translate by one row and never look ahead") {
    const SplitConfig cfg{30, 24, 5};
    for (auto scheme : {Scheme::MatrixPairs, Scheme::MatrixFullWindow, Scheme::MultiDimWindow, Scheme::MatrixList}) {
        const auto plan = make_plan(scheme, cfg);
        for (std::size_t k = 1; k < plan.folds.size(); ++k) {
            const auto& prev = plan.folds[k - 1];
            const auto& cur = plan.folds[k];
            CHECK(cur.target_row == prev.target_row + 1);
            CHECK(cur.validation_input == prev.validation_input.shifted(1));
            REQUIRE(cur.training.size() == prev.training.size());
            for (std::size_t j = 0; j < cur.training.size(); ++j) {
                CHECK(cur.training[j] == prev.training[j].shifted(1));
            }
        }
        for (const auto& fold : plan.folds) {
            for (const auto& pair : fold.training) {
                CHECK(pair.input.last <= fold.last_visible_row());
                if (pair.target) {
                    CHECK(pair.target->last <= fold.last_visible_row());
                }
            }
            CHECK(fold.validation_input.input.last <= fold.last_visible_row());
        }
    }
}

TEST_CASE("fixed stack keeps the first training set") {
    const SplitConfig cfg{12, 9, 3};
    const auto plan = plan_multidim_window(cfg, StackMode::Fixed);
    for (const auto& fold : plan.folds) {
        CHECK(fold.training == plan.folds.front().training);
    }
    CHECK(plan.folds.back().target_row == 12);
}

TEST_CASE("final fold trains on every history row") {
    const auto f = final_fold(Scheme::MatrixPairs, 40, std::nullopt);
    CHECK(f.target_row == 41);
    CHECK(f.training.front() == SamplePair{{1, 39}, RowRange{40, 40}});
    const auto w = final_fold(Scheme::MultiDimWindow, 40, 8);
    CHECK(w.training.back() == SamplePair{{32, 39}, RowRange{40, 40}});
    CHECK(w.validation_input.input == RowRange{33, 40});
}

TEST_CASE("scheme names") {
    for (auto scheme : {Scheme::MatrixPairs, Scheme::MatrixFullWindow, Scheme::MultiDimWindow, Scheme::MatrixList}) {
        CHECK(parse_scheme(to_string(scheme)) == scheme);
    }
    CHECK(parse_scheme("multidim") == Scheme::MultiDimWindow);
    CHECK_THROWS_AS(parse_scheme("diagonal"), ConfigError);
}

TEST_CASE("hyper-parameter grids") {
    const auto grid = HyperGrid::from_json(Json::parse(R"({"p": [1, 2], "lambda": [0.1, 1.0, 10.0]})"));
    CHECK(grid.size() == 6);
    CHECK(grid.at(0).str() == "p=1 lambda=0.1");
    CHECK(grid.at(1).str() == "p=1 lambda=1");
    CHECK(grid.at(3).str() == "p=2 lambda=0.1");
    CHECK(grid.at(5).get_int("p") == 2);
    CHECK(grid.at(5).get_real("lambda") == 10.0);
    CHECK(HyperGrid{}.size() == 1);
    CHECK(HyperGrid{}.at(0).str() == "default");
    CHECK(HyperGrid::from_json(grid.to_json()).enumerate() == grid.enumerate());
    CHECK_THROWS_AS(HyperGrid::from_json(Json::parse(R"({"p": []})")), ConfigError);
    CHECK_THROWS_AS(grid.at(0).get_real("missing"), ConfigError);
}

TEST_CASE("grid search") {
    SUBCASE("naive on a series that repeats its last row has zero error") {
        Matrix data(20, 3);
        for (Eigen::Index r = 0; r < 20; ++r) {
            data.row(r) << 0.5, 0.25, 1.0;
        }
        const auto naive = make_family("naive");
        const auto result = grid_search(*naive, naive->default_grid(), data, SplitConfig{20, 16, std::nullopt});
        CHECK(result.assignments.size() == 1);
        CHECK(result.fold_errors[0].size() == 4);
        CHECK(result.best_error() == 0.0);
    }
    SUBCASE("ties go to the earliest grid point") {
        const ScriptedFamily family;
        const HyperGrid grid({{"point", {std::string("A"), std::string("B")}}});
        const Matrix data = Matrix::Ones(10, 1);
        const auto result = grid_search(family, grid, data, SplitConfig{10, 8, std::nullopt});
        CHECK(result.fold_errors[0][0] == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(result.fold_errors[0][1] == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(result.mean_errors[0] == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(result.mean_errors[1] == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(result.best_index == 0);
        CHECK(result.best_assignment().get_string("point", "") == "A");
    }
    SUBCASE("wrong data length is rejected") {
        const auto naive = make_family("naive");
        CHECK_THROWS_AS(grid_search(*naive, {}, Matrix::Ones(9, 1), SplitConfig{10, 8, std::nullopt}), ConfigError);
    }
}

TEST_CASE("derived seeds") {
    static_assert(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
    CHECK(derive_seed(1, {}) != derive_seed(1, {0}));
}
