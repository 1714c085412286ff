#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "mtsf/dataset.hpp"
#include "mtsf/recipe.hpp"
#include "mtsf/synthetic.hpp"

using namespace mtsf;

namespace {

SeriesMatrix column(std::initializer_list<double> values) {
    Matrix m(static_cast<Eigen::Index>(values.size()), 1);
    Eigen::Index i = 0;
    for (double v : values) {
        m(i++, 0) = v;
    }
    return SeriesMatrix(m, {"a"});
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mtsf_unit_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("series matrix invariants") {
    CHECK_THROWS_AS(SeriesMatrix(Matrix::Zero(1, 2), {"a", "b"}), DataError);
    CHECK_THROWS_AS(SeriesMatrix(Matrix::Zero(3, 0), {}), DataError);
    CHECK_THROWS_AS(SeriesMatrix(Matrix::Zero(3, 2), {"a"}), DataError);
    Matrix bad = Matrix::Zero(3, 1);
    bad(1, 0) = std::nan("");
    CHECK_THROWS_AS(SeriesMatrix(bad, {"a"}), DataError);
}

TEST_CASE("csv parsing") {
    SUBCASE("plain wide file") {
        const auto m = parse_csv("a,b\n1,4\n2,5\n3,6\n");
        CHECK(m.rows() == 3);
        CHECK(m.cols() == 2);
        CHECK(m.values()(2, 1) == 6.0);
        CHECK(m.series_ids() == std::vector<std::string>{"a", "b"});
    }
    SUBCASE("timestamp column kept as metadata") {
        CsvSchema schema;
        schema.timestamp_column = "time";
        const auto m = parse_csv("time,a\n2020-01-01,1.5\n2020-01-02,2.5\n", schema);
        CHECK(m.cols() == 1);
        CHECK(m.timestamps() == std::vector<std::string>{"2020-01-01", "2020-01-02"});
    }
    SUBCASE("missing cell drops the column") {
        const auto m = parse_csv("a,b,c\n1,,3\n4,5,6\n7,NaN,9\n");
        CHECK(m.series_ids() == std::vector<std::string>{"a", "c"});
    }
    SUBCASE("forward fill") {
        CsvSchema schema;
        schema.missing_policy = MissingPolicy::ForwardFill;
        const auto m = parse_csv("a,b\n1,\n2,5\n3,\n", schema);
        // b has a leading gap and is dropped; a is complete
        CHECK(m.series_ids() == std::vector<std::string>{"a"});
        const auto f = parse_csv("a,b\n1,2\n2,\n3,7\n", schema);
        CHECK(f.values()(1, 1) == 2.0);
    }
    SUBCASE("zeros as missing") {
        CsvSchema schema;
        schema.zero_is_missing = true;
        const auto m = parse_csv("a,b\n1,0\n2,5\n", schema);
        CHECK(m.series_ids() == std::vector<std::string>{"a"});
    }
    SUBCASE("selected value columns keep their order") {
        CsvSchema schema;
        schema.value_columns = {"c", "a"};
        const auto m = parse_csv("a,b,c\n1,2,3\n4,5,6\n", schema);
        CHECK(m.series_ids() == std::vector<std::string>{"c", "a"});
        CHECK(m.values()(1, 0) == 6.0);
    }
    SUBCASE("quoted header and byte order mark") {
        const auto m = parse_csv("\xEF\xBB\xBF\"seg, 1\",b\r\n1,2\r\n3,4\r\n");
        CHECK(m.series_ids().front() == "seg, 1");
        CHECK(m.values()(1, 1) == 4.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_csv("a,b\n1,2\n3\n"), DataError);
        CHECK_THROWS_AS(parse_csv("a,b\n1,x\n3,4\n"), DataError);
        CHECK_THROWS_AS(parse_csv("a\n1\n\n"), DataError);
        CHECK_THROWS_AS(parse_csv("a,b\n,1\n2,\n"), DataError);
        CHECK_THROWS_AS(parse_csv(""), DataError);
        CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), IoError);
    }
}

TEST_CASE("csv write and reload is exact") {
    const auto m = synthetic::random_walk(20, 4, 9);
    const auto again = parse_csv(format_csv(m));
    CHECK(again.values() == m.values());
    CHECK(again.series_ids() == m.series_ids());

    const auto dir = temp_dir("csv");
    write_csv(m, dir / "m.csv");
    CHECK(load_csv(dir / "m.csv").values() == m.values());
    // same bytes, same matrix
    CHECK(load_csv(dir / "m.csv") == load_csv(dir / "m.csv"));
}

TEST_CASE("resampling") {
    const auto m = column({1, 3, 5, 7});
    CHECK(resample_mean(m, 2).values() == (Matrix(2, 1) << 2, 6).finished());
    CHECK(resample_sum(m, 2).values() == (Matrix(2, 1) << 4, 12).finished());
    CHECK(resample_mean(m, 1).values() == m.values());
    CHECK(resample_sum(m, 1).values() == m.values());
    CHECK(resample_mean(column({1, 2, 3, 4, 5}), 2).rows() == 2);
    CHECK_THROWS(resample_mean(m, 0));
    CHECK_THROWS(resample_sum(m, 0));

    SUBCASE("hourly to daily") {
        Matrix hourly(365 * 24, 2);
        for (Eigen::Index r = 0; r < hourly.rows(); ++r) {
            hourly(r, 0) = static_cast<double>(r % 24);
            hourly(r, 1) = static_cast<double>(r / 24);
        }
        const auto daily = resample_mean(SeriesMatrix(hourly, {"h", "d"}), 24);
        CHECK(daily.rows() == 365);
        for (Eigen::Index r = 0; r < 365; ++r) {
            CHECK(daily.values()(r, 0) == doctest::Approx(11.5));
            CHECK(daily.values()(r, 1) == static_cast<double>(r));
        }
    }
    SUBCASE("quarter hours to daily totals") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 2.0);
        Matrix q(96 * 7, 1);
        for (Eigen::Index r = 0; r < q.rows(); ++r) {
            q(r, 0) = u(rng);
        }
        const auto days = resample_sum(SeriesMatrix(q, {"kwh"}), 96);
        REQUIRE(days.rows() == 7);
        for (Eigen::Index d = 0; d < 7; ++d) {
            double total = 0.0;
            for (Eigen::Index k = 0; k < 96; ++k) {
                total += q(d * 96 + k, 0);
            }
            CHECK(days.values()(d, 0) == doctest::Approx(total).epsilon(1e-12));
        }
    }
    SUBCASE("mean times group size equals sum") {
        const auto w = synthetic::random_walk(50, 3, 4);
        for (std::size_t g : {1u, 2u, 7u, 25u}) {
            const Matrix scaled = resample_mean(w, g).values() * static_cast<double>(g);
            CHECK((scaled - resample_sum(w, g).values()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("slice windows") {
    Matrix v(100, 1);
    for (Eigen::Index r = 0; r < 100; ++r) {
        v(r, 0) = static_cast<double>(r + 1);
    }
    const SeriesMatrix m(v, {"row"});
    CHECK(slice_window(m, 1, 100) == m);
    const auto s = slice_window(m, 11, 41);
    CHECK(s.rows() == 41);
    CHECK(s.values()(0, 0) == 11.0);
    CHECK(s.values()(40, 0) == 51.0);
    CHECK(s.origin_index() == 11);
    CHECK_THROWS_AS(slice_window(m, 61, 41), DataError);
    CHECK_THROWS_AS(slice_window(m, 0, 5), DataError);

    // (a, k) then (b, j) equals (a + b - 1, j)
    for (std::size_t a : {1u, 5u, 30u}) {
        for (std::size_t b : {1u, 3u, 10u}) {
            const auto twice = slice_window(slice_window(m, a, 40), b, 20);
            const auto once = slice_window(m, a + b - 1, 20);
            CHECK(twice == once);
        }
    }
}

TEST_CASE("column selection") {
    const auto m = parse_csv("a,b,c\n1,2,3\n4,5,6\n");
    CHECK(select_columns(m, {"c", "a"}).values() == (Matrix(2, 2) << 3, 1, 6, 4).finished());
    CHECK_THROWS_AS(select_columns(m, {"z"}), DataError);
}

TEST_CASE("min-max scaling") {
    const auto m = column({0, 5, 10});
    const auto t = fit_scaler(m);
    CHECK(t.mins(0) == 0.0);
    CHECK(t.maxs(0) == 10.0);
    CHECK(t.degenerate_columns.empty());
    CHECK(apply_scaler(m, t).values() == (Matrix(3, 1) << 0, 0.5, 1).finished());
    CHECK(apply_scaler((Matrix(1, 1) << 12).finished(), t)(0, 0) == doctest::Approx(1.2));
    CHECK(invert_scaler((RowVector(1) << 0.5).finished(), t)(0) == 5.0);

    const auto flat = column({4, 4, 4});
    const auto tf = fit_scaler(flat);
    CHECK(tf.degenerate_columns == std::set<std::size_t>{0});
    CHECK(tf.mins(0) == 4.0);
    CHECK(tf.maxs(0) == 4.0);
    CHECK(apply_scaler(flat, tf).values().isZero());
    CHECK(invert_scaler((RowVector(1) << 0.7).finished(), tf)(0) == 4.0);

    const auto two = fit_scaler((Matrix(2, 2) << 1, 10, 3, 20).finished());
    CHECK(two.mins == (RowVector(2) << 1, 10).finished());
    CHECK(two.maxs == (RowVector(2) << 3, 20).finished());

    CHECK_THROWS_AS(apply_scaler(Matrix::Zero(2, 3), two), DataError);
    CHECK_THROWS_AS(invert_scaler(RowVector::Zero(3), two), DataError);

    SUBCASE("round trip and unit range") {
        const auto w = synthetic::random_walk(60, 5, 17);
        const auto fit = fit_scaler(w);
        const Matrix scaled = apply_scaler(w.values(), fit);
        CHECK(scaled.minCoeff() == 0.0);
        CHECK(scaled.maxCoeff() == 1.0);
        for (Eigen::Index r = 0; r < scaled.rows(); ++r) {
            const RowVector back = invert_scaler(scaled.row(r), fit);
            for (Eigen::Index n = 0; n < back.size(); ++n) {
                const double x = w.values()(r, n);
                CHECK(std::abs(back(n) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
            }
        }
    }
}

TEST_CASE("preparation recipes") {
    const auto dir = temp_dir("recipe");
    {
        std::ofstream raw(dir / "raw.csv");
        raw << "time,s1,s2,s3\n";
        for (int r = 0; r < 12; ++r) {
            raw << "t" << r << ',' << r << ',' << (r == 5 ? 0 : 2 * r + 1) << ',' << 1 << '\n';
        }
    }
    {
        std::ofstream recipe(dir / "r.json");
        recipe << R"({"source_path": "raw.csv", "timestamp_column": "time", "zero_is_missing": true,
                      "missing_policy": "drop", "resample": {"op": "sum", "group_size": 4},
                      "resolution": "daily"})";
    }
    const auto m = prepare_dataset(load_recipe(dir / "r.json"));
    // s1 has a zero in row 1 and s2 one in row 6, both dropped by the zero rule
    CHECK(m.series_ids() == std::vector<std::string>{"s3"});
    CHECK(m.rows() == 3);
    CHECK(m.values()(0, 0) == 4.0);
    CHECK(m.resolution() == "daily");

    auto keep = load_recipe(dir / "r.json");
    keep.keep_columns = {"s3"};
    CHECK(prepare_dataset(keep) == m);
    keep.keep_columns = {"s1"};
    CHECK_THROWS_AS(prepare_dataset(keep), DataError);

    CHECK_THROWS_AS(parse_recipe(R"({"source_path": "x.csv", "bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_recipe(R"({"source_path": "x.csv", "resample": {"op": "median", "group_size": 2}})"),
                    ConfigError);
    CHECK_THROWS_AS(prepare_dataset(parse_recipe(R"({"source_path": "missing.csv"})", dir)), IoError);
}
