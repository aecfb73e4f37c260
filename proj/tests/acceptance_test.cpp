// Acceptance suite: one test per acceptance criterion, each printing a
// [CRITERION nn] PASS/FAIL line. Reference values live in
// reference_values.hpp / url_golden.hpp and were computed independently of
// the library (see reference/gen_reference_values.py).

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "misinfo/cli.hpp"
#include "misinfo/evaluation.hpp"
#include "misinfo/models.hpp"
#include "misinfo/resample.hpp"
#include "misinfo/synth.hpp"
#include "reference_values.hpp"
#include "url_golden.hpp"

using namespace misinfo;
namespace fs = std::filesystem;

namespace {

class CriterionPrinter : public testing::EmptyTestEventListener {
    void OnTestEnd(const testing::TestInfo& info) override {
        const std::string name = info.name();
        const auto underscore = name.find('_');
        std::printf("[%s] %s — %s\n",
                    name.substr(0, underscore).c_str(),
                    info.result()->Passed() ? "PASS" : "FAIL",
                    name.substr(underscore + 1).c_str());
        std::fflush(stdout);
    }
};

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("mi_acc_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    std::string str() const { return path.string(); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// Criterion 1: metrics from 50 randomized confusion matrices (plus the
// worked fixture) match an independent recount of the raw label vectors to
// 1e-12, in under a second.
TEST(Acceptance, CRITERION01_MetricOracleAgainstBruteForceRecount) {
    const auto t0 = std::chrono::steady_clock::now();

    const auto fixture = eval::metrics(eval::ConfusionMatrix{60, 20, 900, 20});
    EXPECT_NEAR(fixture.precision, 0.75, 1e-12);
    EXPECT_NEAR(fixture.recall, 0.75, 1e-12);
    EXPECT_NEAR(fixture.f1, 0.75, 1e-12);
    EXPECT_NEAR(fixture.accuracy, 0.96, 1e-12);

    auto rng = make_rng(20200801);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 50 + uniform_index(rng, 450);
        std::vector<int> y_true(n), y_pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_true[i] = static_cast<int>(uniform_index(rng, 2));
            y_pred[i] = static_cast<int>(uniform_index(rng, 2));
        }
        y_true[0] = 1;
        y_true[1] = 0;

        // independent recount
        double tp = 0, fp = 0, tn = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (y_true[i] == 1 && y_pred[i] == 1) tp += 1;
            if (y_true[i] == 0 && y_pred[i] == 1) fp += 1;
            if (y_true[i] == 0 && y_pred[i] == 0) tn += 1;
            if (y_true[i] == 1 && y_pred[i] == 0) fn += 1;
        }
        const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
        const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
        const double f1 =
            precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
        const double accuracy = (tp + tn) / static_cast<double>(n);

        const auto cm = eval::confusion(y_true, y_pred);
        const auto m = eval::metrics(cm);
        ASSERT_EQ(static_cast<double>(cm.tp), tp);
        ASSERT_EQ(static_cast<double>(cm.fp), fp);
        ASSERT_EQ(static_cast<double>(cm.tn), tn);
        ASSERT_EQ(static_cast<double>(cm.fn), fn);
        ASSERT_NEAR(m.precision, precision, 1e-12);
        ASSERT_NEAR(m.recall, recall, 1e-12);
        ASSERT_NEAR(m.f1, f1, 1e-12);
        ASSERT_NEAR(m.accuracy, accuracy, 1e-12);
    }
    EXPECT_LT(elapsed_seconds(t0), 1.0);
}

// Criterion 2: the URL extractor reproduces the hand-counted golden rows
// bit-exactly for 30 fixture URLs including the six typosquat domains.
TEST(Acceptance, CRITERION02_UrlExtractorGoldenSuite) {
    const auto t0 = std::chrono::steady_clock::now();
    auto provider = reference::seeded_age_provider();
    ASSERT_GE(reference::url_golden_cases().size(), 25u);
    const std::set<std::string> required = {
        "paypal--accounts.com",  "fr.facebok.com",      "cnn-trending.com",
        "fox-news24.com",        "abcnews.com.co",      "ilfattoquotidaino.it"};
    std::set<std::string> present;
    for (const auto& c : reference::url_golden_cases()) {
        for (const auto& need : required)
            if (c.url.find(need) != std::string::npos) present.insert(need);
        std::optional<int> age;
        try {
            age = provider.lookup_age(url::registrable_domain(c.url));
        } catch (const ValidationError&) {
            age = std::nullopt;
        }
        ASSERT_EQ(url::extract_url_features(c.url, age), c.expected) << c.url;
    }
    EXPECT_EQ(present, required);
    EXPECT_LT(elapsed_seconds(t0), 1.0);
}

// Criterion 3: TF-IDF vectors on the five-document corpus (and the worked
// two-document example) match hand-computed values to 1e-9.
TEST(Acceptance, CRITERION03_TfidfOracle) {
    const auto [model2, rows2] = text::tfidf_fit_transform({{"a", "b"}, {"a"}}, 1);
    ASSERT_NEAR(model2.idf[1], reference::kTfidf2DocIdfB, 1e-9);
    ASSERT_NEAR(rows2[0].entries[0].second, reference::kTfidf2DocRow0A, 1e-9);
    ASSERT_NEAR(rows2[0].entries[1].second, reference::kTfidf2DocRow0B, 1e-9);

    const auto [model, rows] = text::tfidf_fit_transform(reference::tfidf_corpus5(), 1);
    const auto& idf = reference::tfidf_corpus5_idf();
    ASSERT_EQ(model.idf.size(), idf.size());
    for (std::size_t i = 0; i < idf.size(); ++i) ASSERT_NEAR(model.idf[i], idf[i], 1e-9);
    const auto& expected = reference::tfidf_corpus5_rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<double> dense(model.vocab.size(), 0.0);
        for (const auto& [col, w] : rows[r].entries) dense[col] = w;
        for (std::size_t c = 0; c < dense.size(); ++c)
            ASSERT_NEAR(dense[c], expected[r][c], 1e-9) << "doc " << r << " col " << c;
    }
}

// Criterion 4: 1000 resampling trials; over-sampling balances exactly with
// every added row an exact duplicate, under-sampling yields a multiset
// subset, zero violations.
TEST(Acceptance, CRITERION04_ResamplingInvariants) {
    auto rng = make_rng(777);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n_fake = 2 + uniform_index(rng, 18);
        const std::size_t n_real = n_fake + uniform_index(rng, 80);
        const std::size_t n = n_fake + n_real;
        auto m = pipeline::FeatureMatrix::zeros(n, 2);
        m.column_names = {"id", "v"};
        m.column_block.assign(2, pipeline::ColumnBlock::url);
        for (std::size_t r = 0; r < n; ++r) {
            m.at(r, 0) = static_cast<double>(r);
            m.at(r, 1) = uniform_real(rng);
            m.labels.push_back(r < n_fake ? 1 : 0);
        }
        resample::ResampleConfig cfg;
        cfg.method = trial % 2 ? resample::Method::over : resample::Method::under;
        cfg.seed = rng();
        const auto out = resample::resample(m, cfg);

        std::size_t fake = 0, real = 0;
        std::set<double> minority_ids_seen;
        for (std::size_t r = 0; r < out.matrix.n_rows; ++r) {
            (out.matrix.labels[r] == 1 ? fake : real) += 1;
            const auto src = out.source_rows[r];
            ASSERT_LT(src, n);
            // exact duplicate of an input row, never interpolated
            ASSERT_EQ(out.matrix.at(r, 0), m.at(src, 0));
            ASSERT_EQ(out.matrix.at(r, 1), m.at(src, 1));
            ASSERT_EQ(out.matrix.labels[r], m.labels[src]);
            if (out.matrix.labels[r] == 1) minority_ids_seen.insert(out.matrix.at(r, 0));
        }
        ASSERT_EQ(fake, real);
        if (cfg.method == resample::Method::over) {
            ASSERT_EQ(fake, n_real);
            ASSERT_EQ(minority_ids_seen.size(), n_fake);  // originals all retained
        } else {
            ASSERT_EQ(real, n_fake);
            std::set<std::size_t> majority_sources;
            for (std::size_t r = 0; r < out.matrix.n_rows; ++r)
                if (out.matrix.labels[r] == 0)
                    ASSERT_TRUE(majority_sources.insert(out.source_rows[r]).second)
                        << "under-sampling drew a majority row twice";
        }
    }
}

// Criterion 5: across 20 seeded k=5 runs, no test-fold row ever reaches the
// vocabulary, scaler, selection, resampling or training calls.
TEST(Acceptance, CRITERION05_LeakageGuard) {
    auto spec = corpus::SynthSpec::defaults();
    spec.n_records = 100;
    spec.fake_fraction = 0.3;
    spec.noise_vocab_size = 60;
    spec.seed = 60;
    const auto data = corpus::generate_synthetic(spec);

    pipeline::FeatureConfig fc;
    fc.min_df = 1;
    eval::EvalConfig ec;
    resample::ResampleConfig rc;
    rc.method = resample::Method::over;
    models::ModelSpec model = models::default_spec(models::Algorithm::naive_bayes);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto folds = corpus::stratified_kfold(data.dataset, 5, derive_seed(seed, "folds"));
        std::map<std::size_t, std::set<std::size_t>> test_rows;
        for (std::size_t f = 0; f < folds.size(); ++f)
            test_rows[f] = {folds[f].test_indices.begin(), folds[f].test_indices.end()};

        std::set<std::string> stages;
        eval::CvInstrumentation instr;
        instr.on_stage = [&](std::string_view stage, std::size_t fold,
                             std::span<const std::size_t> rows) {
            stages.insert(std::string(stage));
            for (auto r : rows)
                ASSERT_FALSE(test_rows[fold].count(r))
                    << "seed " << seed << ": test row " << r << " reached " << stage;
        };
        eval::cross_validate(data.dataset, fc, model, rc, ec, seed, nullptr, &instr);
        for (const char* stage : {"vocab_fit", "scaler_fit", "selection_fit", "resample", "train"})
            ASSERT_TRUE(stages.count(stage)) << stage;
    }
}

// Criterion 6: chi-squared statistics/p-values on ten fixed 2x2 tables and
// Welch t/df/p on ten fixed sample pairs match the high-precision references
// to 1e-9.
TEST(Acceptance, CRITERION06_StatisticalOracles) {
    for (const auto& c : reference::chi2_cases()) {
        const auto r = stats::chi2_2x2(c.n11, c.n10, c.n01, c.n00);
        ASSERT_NEAR(r.statistic, c.statistic, 1e-9 * std::max(1.0, std::fabs(c.statistic)));
        ASSERT_NEAR(r.p_value, c.p_value, 1e-9);
    }
    for (const auto& c : reference::welch_cases()) {
        const auto r = stats::welch_ttest(c.a, c.b);
        ASSERT_NEAR(r.t_statistic, c.t, 1e-9);
        ASSERT_NEAR(r.degrees_of_freedom, c.df, 1e-7);
        ASSERT_NEAR(r.p_value, c.p, 1e-9);
    }
    const auto pattern = stats::welch_ttest(reference::welch_pattern_a(),
                                            reference::welch_pattern_b());
    ASSERT_NEAR(pattern.t_statistic, reference::kWelchPatternT, 1e-9);
    ASSERT_NEAR(pattern.degrees_of_freedom, reference::kWelchPatternDf, 1e-9);
}

// Criterion 7: the logistic-regression gradient matches central finite
// differences with relative error below 1e-5 at ten random points.
TEST(Acceptance, CRITERION07_GradientCheck) {
    auto rng = make_rng(4242);
    const std::size_t n = 60, cols = 4;
    auto X = pipeline::FeatureMatrix::zeros(n, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        X.column_names.push_back("f" + std::to_string(c));
        X.column_block.push_back(pipeline::ColumnBlock::url);
    }
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(uniform_index(rng, 2));
        for (std::size_t c = 0; c < cols; ++c)
            X.at(i, c) = uniform_real(rng) + 0.3 * y[i] * (c == 0 ? 1.0 : 0.0);
    }
    const double lambda = 1e-3;
    const double h = 1e-6;
    for (int point = 0; point < 10; ++point) {
        std::vector<double> w(cols);
        for (auto& v : w) v = 2.0 * uniform_real(rng) - 1.0;
        const double b = 2.0 * uniform_real(rng) - 1.0;
        const auto [gw, gb] = models::logreg_gradient(X, y, w, b, lambda);
        for (std::size_t c = 0; c < cols; ++c) {
            auto wp = w, wm = w;
            wp[c] += h;
            wm[c] -= h;
            const double fd = (models::logreg_loss(X, y, wp, b, lambda) -
                               models::logreg_loss(X, y, wm, b, lambda)) /
                              (2 * h);
            ASSERT_LT(std::fabs(gw[c] - fd) / std::max(1.0, std::fabs(fd)), 1e-5);
        }
        const double fd_b = (models::logreg_loss(X, y, w, b + h, lambda) -
                             models::logreg_loss(X, y, w, b - h, lambda)) /
                            (2 * h);
        ASSERT_LT(std::fabs(gb - fd_b) / std::max(1.0, std::fabs(fd_b)), 1e-5);
    }
}

// Criterion 8: directional replication on the seeded synthetic corpus
// (n=3000, 90:10, class-conditional URL-feature and domain-age gaps):
// (a) over-sampling beats under-sampling by >= 0.05 mean F1 for NB and LR
//     with BoW;
// (b) adding URL features raises mean F1 for at least 4 of 5 over-sampled
//     classifiers with mean improvement >= 0.03.
// The full 30-configuration grid must finish within the 5-minute budget.
TEST(Acceptance, CRITERION08_DirectionalReplication) {
    const auto t0 = std::chrono::steady_clock::now();
    TempDir dir("criterion8");

    testing::internal::CaptureStdout();
    ASSERT_EQ(cli::run_cli({"synth", "--n", "3000", "--fake-frac", "0.1", "--seed", "2020",
                            "--out", dir.str()}),
              0);
    testing::internal::GetCapturedStdout();

    const nlohmann::json config = {
        {"dataset", dir.file("synthetic.jsonl")},
        {"age_cache", dir.file("age_cache.jsonl")},
        {"seed", 2020},
        {"jobs", 4},
        {"out", (dir.path / "grid").string()},
        {"models",
         {{{"algorithm", "naive_bayes"}},
          {{"algorithm", "logistic_regression"}},
          {{"algorithm", "linear_svm"}},
          {{"algorithm", "sgd"}},
          {{"algorithm", "random_forest"}, {"rf_trees", 60}}}}};
    {
        std::ofstream out(dir.file("run.json"));
        out << config.dump(2);
    }
    testing::internal::CaptureStdout();
    ASSERT_EQ(cli::run_cli({"compare", "--config", dir.file("run.json")}), 0);
    testing::internal::GetCapturedStdout();

    const auto rows = csv::parse(read_file((dir.path / "grid" / "comparison.csv").string()));
    ASSERT_GE(rows.size(), 31u);  // header + 20 text rows + 10 url rows
    std::map<std::string, double> f1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        // feature_set,resampling,classifier,vectorizer,...,f1 at column 7
        f1[rows[i][0] + "|" + rows[i][1] + "|" + rows[i][2] + "|" + rows[i][3]] =
            std::strtod(rows[i][7].c_str(), nullptr);
    }
    ASSERT_EQ(f1.size(), 30u);

    // (a)
    const double nb_gap =
        f1.at("text|over|naive_bayes|bow") - f1.at("text|under|naive_bayes|bow");
    const double lr_gap = f1.at("text|over|logistic_regression|bow") -
                          f1.at("text|under|logistic_regression|bow");
    EXPECT_GE(nb_gap, 0.05) << "over vs under gap, naive bayes";
    EXPECT_GE(lr_gap, 0.05) << "over vs under gap, logistic regression";

    // (b)
    int improved = 0;
    double mean_delta = 0.0;
    for (const std::string classifier :
         {"naive_bayes", "logistic_regression", "linear_svm", "sgd", "random_forest"}) {
        double delta = 0.0;
        for (const std::string vec : {"bow", "tfidf"}) {
            delta += (f1.at("text+url|over|" + classifier + "|" + vec) -
                      f1.at("text|over|" + classifier + "|" + vec)) /
                     2.0;
        }
        improved += delta > 0.0;
        mean_delta += delta / 5.0;
    }
    EXPECT_GE(improved, 4) << "classifiers improved by URL features";
    EXPECT_GE(mean_delta, 0.03) << "mean F1 improvement from URL features";

    EXPECT_LT(elapsed_seconds(t0), 300.0) << "full grid exceeded the runtime budget";
}

// Criterion 9: synthetic domain-age classes at the reference means and sizes
// (265 fake vs 1865 real) give Welch p < 0.001 with a positive fake-minus-
// real mean-age gap.
TEST(Acceptance, CRITERION09_DomainAgeAnalysis) {
    auto spec = corpus::SynthSpec::defaults();
    spec.n_records = 2130;
    spec.fake_fraction = 265.0 / 2130.0;
    spec.seed = 3650;
    spec.fake.p_age_missing = 0.0;
    spec.real.p_age_missing = 0.0;
    const auto synth = corpus::generate_synthetic(spec);
    auto provider = corpus::provider_from_records(synth.age_records);

    const auto stats = eval::domain_age_stats(synth.dataset, provider);
    EXPECT_EQ(stats.fake.total, 265u);
    EXPECT_EQ(stats.real.total, 1865u);
    EXPECT_GT(stats.fake.mean - stats.real.mean, 0.0);
    EXPECT_LT(stats.welch.p_value, 0.001);
}

// Criterion 10: `compare` with a fixed config and seed produces byte-
// identical report JSON (and tables) across two runs and across
// --jobs 1 vs --jobs 8.
TEST(Acceptance, CRITERION10_CompareDeterminism) {
    TempDir dir("criterion10");
    testing::internal::CaptureStdout();
    ASSERT_EQ(cli::run_cli({"synth", "--n", "150", "--fake-frac", "0.3", "--seed", "17", "--out",
                            dir.str()}),
              0);
    testing::internal::GetCapturedStdout();

    const nlohmann::json config = {
        {"dataset", dir.file("synthetic.jsonl")},
        {"age_cache", dir.file("age_cache.jsonl")},
        {"seed", 17},
        {"models",
         {{{"algorithm", "naive_bayes"}},
          {{"algorithm", "sgd"}},
          {{"algorithm", "random_forest"}, {"rf_trees", 10}}}},
        {"grid",
         {{{"feature_sets", {"text"}}, {"vectorizers", {"bow", "tfidf"}},
           {"resamplings", {"over"}}},
          {{"feature_sets", {"text+url"}}, {"vectorizers", {"bow"}}, {"resamplings", {"over"}}}}},
        {"feature", {{"min_df", 1}}}};
    {
        std::ofstream out(dir.file("run.json"));
        out << config.dump(2);
    }

    auto run = [&](const std::string& out_name, const std::string& jobs) {
        testing::internal::CaptureStdout();
        const int rc = cli::run_cli({"compare", "--config", dir.file("run.json"), "--out",
                                     (dir.path / out_name).string(), "--jobs", jobs});
        testing::internal::GetCapturedStdout();
        ASSERT_EQ(rc, 0);
    };
    run("run_a", "1");
    run("run_b", "1");
    run("run_c", "8");

    std::size_t files_checked = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir.path / "run_a")) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename() == "manifest.json") continue;  // holds timestamps
        const auto rel = fs::relative(entry.path(), dir.path / "run_a");
        const auto a = read_file(entry.path().string());
        const auto b = read_file((dir.path / "run_b" / rel).string());
        const auto c = read_file((dir.path / "run_c" / rel).string());
        ASSERT_FALSE(a.empty()) << rel;
        ASSERT_EQ(a, b) << rel << " differs across identical runs";
        ASSERT_EQ(a, c) << rel << " differs across --jobs 1 vs --jobs 8";
        ++files_checked;
    }
    EXPECT_GE(files_checked, 10u);
}

int main(int argc, char** argv) {
    testing::InitGoogleTest(&argc, argv);
    testing::UnitTest::GetInstance()->listeners().Append(new CriterionPrinter);
    return RUN_ALL_TESTS();
}
