#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dscdma/harness.hpp"

using namespace dscdma;

namespace {

const double kNoiselessSnr = std::numeric_limits<double>::infinity();

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.k_users = 4;
    cfg.n_bits = 12;
    cfg.ns = 2;
    cfg.trials = 40;
    cfg.snr_grid_db = {4.0, 8.0};
    cfg.master_seed = 99;
    return cfg;
}

std::string temp_path(const char* name) {
    return std::string("harness_test_") + name;
}

}  // namespace

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(validate_config(cfg));

    SUBCASE("user count bounded by the family size") {
        cfg.k_users = 34;
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    }
    SUBCASE("profile must match K and descend") {
        cfg.amplitude_profile_db = {0.0, -3.0};
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
        cfg.amplitude_profile_db = {0.0, -3.0, -6.0, -9.0};
        CHECK_NOTHROW(validate_config(cfg));
        cfg.amplitude_profile_db = {-3.0, 0.0, -6.0, -9.0};
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    }
    SUBCASE("fixed delays must be sorted, distinct, in range") {
        cfg.delay_mode = DelayMode::fixed;
        cfg.fixed_delays = {0, 5, 5, 9};
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
        cfg.fixed_delays = {0, 5, 9, 20};
        CHECK_NOTHROW(validate_config(cfg));
    }
    SUBCASE("pilots-only frames rejected") {
        cfg.n_bits = 2;
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    }
}

TEST_CASE("delay protocol: sorted, distinct, anchored at zero") {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 200; ++t) {
        const auto d = draw_delays(4, 32, rng);
        REQUIRE(d.size() == 4);
        CHECK(d[0] == 0);
        for (int k = 1; k < 4; ++k) {
            CHECK(d[k] > d[k - 1]);
            CHECK(d[k] < 32);
        }
    }
}

TEST_CASE("near-far profile references the strongest user") {
    ExperimentConfig cfg;
    cfg.amplitude_profile_db = {0.0, -3.0, -6.0, -9.0};
    const auto amps = profile_amplitudes(cfg);
    CHECK(amps[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 1; k < amps.size(); ++k) {
        CHECK(amps[k] < amps[0]);
    }
}

TEST_CASE("trial seeding") {
    CHECK(mix_seed(1, 8.0, 0) == mix_seed(1, 8.0, 0));
    CHECK(mix_seed(1, 8.0, 0) != mix_seed(1, 8.0, 1));
    CHECK(mix_seed(1, 8.0, 0) != mix_seed(1, 4.0, 0));
    CHECK(mix_seed(1, 8.0, 0) != mix_seed(2, 8.0, 0));
}

TEST_CASE("run_trial: noiseless single user is perfect") {
    ExperimentConfig cfg;
    cfg.k_users = 1;
    cfg.n_bits = 10;
    cfg.ns = 1;
    cfg.channel_mode = ChannelMode::estimated;
    cfg.detectors = {Detector::sic};
    const auto out = run_trial(cfg, kNoiselessSnr, 0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].first == Detector::sic);
    CHECK(out[0].second.bit_errors == 0);
    CHECK(out[0].second.pee < 1e-18);
    CHECK(out[0].second.delay_errors == 0);
    CHECK(out[0].second.data_bits == 8);
}

TEST_CASE("run_trial: noiseless four-user estimation is exact end to end") {
    ExperimentConfig cfg;
    cfg.k_users = 4;
    cfg.n_bits = 8;
    cfg.ns = 1;
    cfg.channel_mode = ChannelMode::estimated;
    cfg.detectors = {Detector::sic};
    for (long long t = 0; t < 20; ++t) {
        const auto out = run_trial(cfg, kNoiselessSnr, t);
        CHECK(out[0].second.pee < 1e-18);
        CHECK(out[0].second.delay_errors == 0);
        CHECK(out[0].second.bit_errors == 0);
    }
}

TEST_CASE("run_trial: bit-exact reproducibility") {
    const auto cfg = small_config();
    const auto a = run_trial(cfg, 8.0, 7);
    const auto b = run_trial(cfg, 8.0, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].second.pee == b[i].second.pee);
        CHECK(a[i].second.amp_mae == b[i].second.amp_mae);
        CHECK(a[i].second.bit_errors == b[i].second.bit_errors);
        CHECK(a[i].second.delay_errors == b[i].second.delay_errors);
    }
}

TEST_CASE("run_sweep: shape and ordering") {
    auto cfg = small_config();

    SUBCASE("empty grid, empty result") {
        cfg.snr_grid_db = {};
        CHECK(run_sweep(cfg).empty());
    }

    SUBCASE("one point, two detectors, two rows") {
        cfg.snr_grid_db = {8.0};
        cfg.detectors = {Detector::mf, Detector::sic};
        cfg.trials = 5;
        const auto rows = run_sweep(cfg);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].detector == Detector::mf);
        CHECK(rows[1].detector == Detector::sic);
        for (const auto& r : rows) {
            CHECK(r.ber_ci95_low <= r.ber);
            CHECK(r.ber <= r.ber_ci95_high);
        }
    }

    SUBCASE("BER falls with SNR for the SIC under a known channel") {
        cfg.snr_grid_db = {4.0, 8.0, 12.0};
        cfg.detectors = {Detector::sic};
        cfg.channel_mode = ChannelMode::known;
        cfg.n_bits = 52;
        cfg.ns = 1;
        cfg.trials = 150;
        const auto rows = run_sweep(cfg);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].ber > rows[1].ber);
        CHECK(rows[1].ber > rows[2].ber);
    }
}

TEST_CASE("CSV: header, rows, round trip") {
    CHECK(csv_string({}) ==
          "snr_db,detector,channel_mode,ns,ber,ber_ci95_low,ber_ci95_high,pee,amp_mae,"
          "delay_error_rate,trials,master_seed\n");

    ResultRow row;
    row.snr_db = 8.0;
    row.detector = Detector::sic;
    row.channel_mode = ChannelMode::known;
    row.ns = 1;
    row.ber = 1.0 / 3.0;
    row.ber_ci95_low = 0.3;
    row.ber_ci95_high = 0.4;
    row.pee = 0.123456789012345678;
    row.amp_mae = 1e-17;
    row.delay_error_rate = 0.25;
    row.trials = 1000;
    row.master_seed = 0xdeadbeef;

    const std::string text = csv_string({row});
    const auto lines = [&] {
        std::vector<std::string> out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) out.push_back(line);
        return out;
    }();
    REQUIRE(lines.size() == 2);

    std::vector<std::string> fields;
    {
        std::istringstream in(lines[1]);
        std::string f;
        while (std::getline(in, f, ',')) fields.push_back(f);
    }
    REQUIRE(fields.size() == 12);
    CHECK(std::stod(fields[0]) == row.snr_db);
    CHECK(fields[1] == "sic");
    CHECK(fields[2] == "known");
    CHECK(std::stod(fields[4]) == row.ber);
    CHECK(std::stod(fields[7]) == row.pee);
    CHECK(std::stod(fields[8]) == row.amp_mae);
    CHECK(std::stoll(fields[10]) == row.trials);

    const auto path = temp_path("round.csv");
    emit_csv({row}, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == text);
    std::remove(path.c_str());
}

TEST_CASE("SVG plots") {
    SUBCASE("empty input still renders a valid document") {
        const auto svg = svg_string({}, "ber");
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("</svg>") != std::string::npos);
    }

    SUBCASE("unknown metric rejected, listing the valid ones") {
        CHECK_THROWS_WITH_AS(svg_string({}, "nope"), doctest::Contains("pee"),
                             std::invalid_argument);
    }

    SUBCASE("one legend entry per detector group, monotone polylines") {
        std::vector<ResultRow> rows;
        for (const auto det : {Detector::mf, Detector::sic}) {
            double ber = 0.1;
            for (const double snr : {0.0, 4.0, 8.0}) {
                ResultRow r;
                r.snr_db = snr;
                r.detector = det;
                r.channel_mode = ChannelMode::known;
                r.ber = ber;
                ber /= 10.0;  // strictly decreasing input series
                rows.push_back(r);
            }
        }
        const auto svg = svg_string(rows, "ber");
        std::size_t legends = 0, pos = 0;
        while ((pos = svg.find("class=\"legend\"", pos)) != std::string::npos) {
            ++legends;
            ++pos;
        }
        CHECK(legends == 2);

        // polyline points must walk right and down (ber falls on a log axis)
        pos = 0;
        int polylines = 0;
        while ((pos = svg.find("points=\"", pos)) != std::string::npos) {
            pos += 8;
            const auto end = svg.find('"', pos);
            std::istringstream pts(svg.substr(pos, end - pos));
            double px = -1e9, py = -1e9;
            std::string pair;
            bool first = true;
            while (pts >> pair) {
                const auto comma = pair.find(',');
                const double x = std::stod(pair.substr(0, comma));
                const double y = std::stod(pair.substr(comma + 1));
                if (!first) {
                    CHECK(x > px);
                    CHECK(y > py);  // svg y grows downward
                }
                px = x;
                py = y;
                first = false;
            }
            ++polylines;
        }
        CHECK(polylines == 2);
    }
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
    auto cfg = small_config();
    cfg.trials = 30;
    const auto first = csv_string(run_sweep(cfg));
    const auto second = csv_string(run_sweep(cfg));
    CHECK(first == second);
    cfg.threads = 4;
    const auto parallel = csv_string(run_sweep(cfg));
    CHECK(first == parallel);
}

TEST_CASE("config files") {
    const auto path = temp_path("conf.txt");
    {
        std::ofstream out(path);
        out << "# sample sweep\n";
        out << "k_users = 3\n";
        out << "n_bits = 20\n";
        out << "ns = 4\n";
        out << "snr_grid_db = 0, 4, 8\n";
        out << "trials = 7\n";
        out << "master_seed = 17\n";
        out << "amplitude_profile_db = 0,-3,-6\n";
        out << "delay_mode = fixed:0,5,9\n";
        out << "channel_mode = known\n";
        out << "detectors = mf,sic\n";
        out << "code_taps = 45,75\n";
        out << "code_indices = 2,4,6\n";
        out << "output_path = out.csv\n";
        out << "threads = 2\n";
    }
    const auto cfg = load_config(path);
    std::remove(path.c_str());
    CHECK(cfg.k_users == 3);
    CHECK(cfg.n_bits == 20);
    CHECK(cfg.ns == 4);
    CHECK(cfg.snr_grid_db == std::vector<double>{0.0, 4.0, 8.0});
    CHECK(cfg.trials == 7);
    CHECK(cfg.master_seed == 17);
    CHECK(cfg.delay_mode == DelayMode::fixed);
    CHECK(cfg.fixed_delays == std::vector<int>{0, 5, 9});
    CHECK(cfg.channel_mode == ChannelMode::known);
    REQUIRE(cfg.detectors.size() == 2);
    CHECK(cfg.code_taps.first == 045);
    CHECK(cfg.code_taps.second == 075);
    CHECK(cfg.code_indices == std::vector<int>{2, 4, 6});
    CHECK(cfg.output_path == "out.csv");
    CHECK(cfg.threads == 2);
    CHECK_NOTHROW(validate_config(cfg));

    SUBCASE("unknown keys and malformed values rejected") {
        ExperimentConfig fresh;
        CHECK_THROWS_AS(apply_config_key(fresh, "bogus", "1"), std::invalid_argument);
        CHECK_THROWS_AS(apply_config_key(fresh, "trials", "many"), std::invalid_argument);
        CHECK_THROWS_AS(apply_config_key(fresh, "channel_mode", "psychic"),
                        std::invalid_argument);
        CHECK_THROWS_AS(load_config("does_not_exist.conf"), std::invalid_argument);
    }
}
