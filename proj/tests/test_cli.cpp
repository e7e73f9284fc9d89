/*
 * Copyright 2026 the emofuse authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "emofuse/csv.hpp"
#include "emofuse/random.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path log = fs::temp_directory_path() / ("emofuse_cli_" +
                                                      std::to_string(getpid()) + "_" +
                                                      std::to_string(counter++) + ".log");
    const std::string cmd = std::string(EMOFUSE_CLI_PATH) + " " + args + " > " +
                            log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream f(log);
    std::stringstream ss;
    ss << f.rdbuf();
    r.output = ss.str();
    fs::remove(log);
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() /
                         ("emofuse_test_" + tag + "_" + std::to_string(getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Data rows of a CSV output (skips '#' preamble and the header row).
std::vector<std::string> data_rows(const fs::path& p) {
    std::ifstream f(p);
    std::vector<std::string> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::string strip_timestamp_lines(const std::string& text) {
    std::istringstream is(text);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("# generated", 0) != 0) os << line << "\n";
    return os.str();
}

} // namespace

TEST_CASE("cli extract") {
    const fs::path out = fresh_dir("extract");

    SECTION("hand stream yields a 96-column feature CSV") {
        const RunResult r = run_cli("extract --stream " + testutil::fixture("hand_stream.csv") +
                                    " --modality hand --window 100 --out " + out.string());
        CHECK(r.exit_code == 0);
        std::ifstream f(out / "features.csv");
        REQUIRE(f.good());
        std::string line;
        std::size_t line_no = 0;
        REQUIRE(emofuse::csv::next_row(f, line, line_no));
        CHECK(emofuse::csv::split(line).size() == 96);
        CHECK(data_rows(out / "features.csv").size() == 2);  // 250 frames, tumbling
    }
    SECTION("stride flag changes the window count") {
        const RunResult r = run_cli("extract --stream " + testutil::fixture("hand_stream.csv") +
                                    " --window 100 --stride 50 --out " + out.string());
        CHECK(r.exit_code == 0);
        CHECK(data_rows(out / "features.csv").size() == 4);
    }
    SECTION("empty input directory exits 2") {
        const fs::path empty = fresh_dir("empty_streams");
        const RunResult r =
            run_cli("extract --stream " + empty.string() + " --out " + out.string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("no input") != std::string::npos);
    }
    SECTION("missing file exits 2") {
        const RunResult r = run_cli("extract --stream /nonexistent.csv --out " + out.string());
        CHECK(r.exit_code == 2);
    }
    SECTION("corpus adaptation via a mapping") {
        const RunResult r = run_cli(
            "extract --stream " + testutil::fixture("corpus_20joint.txt") + " --mapping " +
            testutil::fixture("map_hand_from_20joint.cfg") + " --window 2 --out " + out.string());
        CHECK(r.exit_code == 0);
        CHECK(data_rows(out / "features.csv").size() == 1);  // 3 rows, window 2, tumbling
    }
    SECTION("outputs are byte-identical apart from the timestamp line") {
        const fs::path out2 = fresh_dir("extract_again");
        const std::string args = "extract --seed 7 --stream " +
                                 testutil::fixture("hand_stream.csv") + " --out ";
        REQUIRE(run_cli(args + out.string()).exit_code == 0);
        REQUIRE(run_cli(args + out2.string()).exit_code == 0);
        CHECK(strip_timestamp_lines(slurp(out / "features.csv")) ==
              strip_timestamp_lines(slurp(out2 / "features.csv")));
    }
}

TEST_CASE("cli calibrate") {
    const fs::path out = fresh_dir("calibrate");

    SECTION("elbow fixture produces the 92..95 interval") {
        const RunResult r = run_cli("calibrate --bundles " +
                                    testutil::fixture("bundles_uncalibrated.json") +
                                    " --exemplars " + testutil::fixture("elbow_exemplars.csv") +
                                    " --out " + out.string());
        CHECK(r.exit_code == 0);
        const std::string report = slurp(out / "calibration_report.csv");
        CHECK(report.find("hands_on_waist,R1,92,95,0,3") != std::string::npos);
        const std::string bundles = slurp(out / "bundles_calibrated.json");
        CHECK(bundles.find("\"min\": 92.0") != std::string::npos);
        CHECK(bundles.find("\"max\": 95.0") != std::string::npos);
    }
    SECTION("margin flag widens intervals per the formula") {
        const RunResult r = run_cli("calibrate --margin 0.1 --bundles " +
                                    testutil::fixture("bundles_uncalibrated.json") +
                                    " --exemplars " + testutil::fixture("elbow_exemplars.csv") +
                                    " --out " + out.string());
        CHECK(r.exit_code == 0);
        // span 3 widened by 0.3 on each side
        const std::string report = slurp(out / "calibration_report.csv");
        CHECK(report.find("hands_on_waist,R1,91.7,95.3,0.1,3") != std::string::npos);
    }
    SECTION("missing descriptor exits 3 and names the rule") {
        const fs::path bad = fresh_dir("calibrate_bad");
        std::ofstream f(bad / "exemplars.csv");
        f << "bundle,dist:a:b\nhands_on_waist,1.0\n";
        f.close();
        const RunResult r = run_cli("calibrate --bundles " +
                                    testutil::fixture("bundles_uncalibrated.json") +
                                    " --exemplars " + (bad / "exemplars.csv").string() +
                                    " --out " + out.string());
        CHECK(r.exit_code == 3);
        CHECK(r.output.find("R1") != std::string::npos);
    }
}

TEST_CASE("cli train") {
    const fs::path out = fresh_dir("train");
    const fs::path features = out / "blobs.csv";
    {
        // three separated blobs in 2 dims, written as a labeled feature table
        emofuse::rng::Engine eng = emofuse::rng::make_engine(12);
        std::ofstream f(features);
        f << "label,dist:a:b,dist:a:c\n";
        const double centers[3][2] = {{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}};
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < 20; ++i)
                f << c << ',' << centers[c][0] + 0.4 * emofuse::rng::gaussian(eng) << ','
                  << centers[c][1] + 0.4 * emofuse::rng::gaussian(eng) << "\n";
    }

    SECTION("training writes a model and a CV report") {
        const RunResult r = run_cli("train --features " + features.string() +
                                    " --folds 10 --seed 3 --out " + out.string());
        CHECK(r.exit_code == 0);
        const std::string model = slurp(out / "model.json");
        CHECK(model.find("emofuse-svm-v1") != std::string::npos);
        CHECK(data_rows(out / "cv_report.csv").size() == 11);  // 10 folds + mean
        CHECK(fs::exists(out / "cv_confusion.csv"));
    }
    SECTION("gamma override is recorded in the model file") {
        const RunResult r = run_cli("train --features " + features.string() +
                                    " --gamma 0.0625 --folds 0 --out " + out.string());
        CHECK(r.exit_code == 0);
        CHECK(slurp(out / "model.json").find("\"gamma\":0.0625") != std::string::npos);
    }
    SECTION("more folds than samples exits 3") {
        const RunResult r = run_cli("train --features " + features.string() +
                                    " --folds 100 --out " + out.string());
        CHECK(r.exit_code == 3);
    }
}

TEST_CASE("cli fuse") {
    const fs::path out = fresh_dir("fuse");

    SECTION("vote trace fixture predicts 4") {
        const RunResult r = run_cli("fuse --replay " + testutil::fixture("vote_trace.csv") +
                                    " --buffer 10 --out " + out.string());
        CHECK(r.exit_code == 0);
        const std::vector<std::string> rows = data_rows(out / "predictions.csv");
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].rfind("0,4,", 0) == 0);
    }
    SECTION("disabling the rule source") {
        const RunResult r = run_cli("fuse --replay " + testutil::fixture("vote_trace.csv") +
                                    " --disable rule --out " + out.string());
        CHECK(r.exit_code == 0);
        REQUIRE(data_rows(out / "predictions.csv").size() == 1);
    }
    SECTION("sweep emits one accuracy per size") {
        const RunResult r = run_cli("fuse --replay " + testutil::fixture("sweep_votes.csv") +
                                    " --sweep 5,10,15,20,25 --out " + out.string());
        CHECK(r.exit_code == 0);
        const std::vector<std::string> rows = data_rows(out / "sweep.csv");
        REQUIRE(rows.size() == 5);
        double acc5 = -1, acc10 = -1;
        for (const std::string& row : rows) {
            const std::vector<std::string> cells = emofuse::csv::split(row);
            if (cells[0] == "5") acc5 = emofuse::csv::to_double(cells[1]);
            if (cells[0] == "10") acc10 = emofuse::csv::to_double(cells[1]);
        }
        CHECK(acc10 >= acc5);
    }
    SECTION("missing replay file exits 2") {
        const RunResult r = run_cli("fuse --replay /nonexistent.csv --out " + out.string());
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("cli eval") {
    const fs::path out = fresh_dir("eval");

    SECTION("matrix against its reference table passes") {
        const RunResult r = run_cli("eval --matrix " + testutil::paper_table("table04.csv") +
                                    " --reference " + testutil::paper_table("table16.csv") +
                                    " --out " + out.string());
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("PASS") != std::string::npos);
        CHECK(fs::exists(out / "metrics.csv"));
        CHECK(fs::exists(out / "diff.csv"));
    }
    SECTION("perturbed reference exits 1 and names the failing cell") {
        // copy the reference and nudge one precision value
        const fs::path bad = out / "bad_ref.csv";
        std::ofstream f(bad);
        std::istringstream src(slurp(testutil::paper_table("table16.csv")));
        std::string line;
        while (std::getline(src, line)) {
            if (line.rfind("0,", 0) == 0) line = "0,0.661,0.817,0.725,0.167";
            f << line << "\n";
        }
        f.close();
        const RunResult r = run_cli("eval --matrix " + testutil::paper_table("table04.csv") +
                                    " --reference " + bad.string() + " --out " + out.string());
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("FAIL") != std::string::npos);
        CHECK(r.output.find("Anger precision") != std::string::npos);
    }
    SECTION("mapping mode labels annotations") {
        const RunResult r = run_cli("eval --mapping " + testutil::mapping_file("ucfkinect.csv") +
                                    " --annotations " +
                                    testutil::fixture("action_annotations.csv") + " --out " +
                                    out.string());
        CHECK(r.exit_code == 0);
        const std::string labeled = slurp(out / "labeled.csv");
        CHECK(labeled.find("1,Punch,0") != std::string::npos);      // Anger
        CHECK(labeled.find("3,Step back,4") != std::string::npos);  // Fear wins over Disgust
        const std::string excl = slurp(out / "exclusions.csv");
        CHECK(excl.find("5,Vault,inconclusive") != std::string::npos);
    }
}

TEST_CASE("cli config file supplies defaults and flags win") {
    const fs::path out = fresh_dir("config");
    const fs::path cfg = out / "run.json";
    {
        std::ofstream f(cfg);
        f << R"({"seed": 99, "extract": {"window": 50, "stream": [")"
          << testutil::fixture("hand_stream.csv") << R"("]}})";
    }
    SECTION("config values used when flags are absent") {
        const RunResult r =
            run_cli("--config " + cfg.string() + " extract --out " + out.string());
        CHECK(r.exit_code == 0);
        CHECK(data_rows(out / "features.csv").size() == 5);  // 250/50 windows
        CHECK(slurp(out / "features.csv").find("seed=99") != std::string::npos);
    }
    SECTION("explicit flag overrides the config") {
        const RunResult r = run_cli("--config " + cfg.string() + " extract --window 100 --out " +
                                    out.string());
        CHECK(r.exit_code == 0);
        CHECK(data_rows(out / "features.csv").size() == 2);
    }
}
