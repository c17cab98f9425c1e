#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef FOCKOPS_CLI_PATH
#error "FOCKOPS_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;

namespace {

struct temp_dir {
    fs::path path;
    temp_dir() {
        path = fs::temp_directory_path() / fs::path("fockops_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~temp_dir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FOCKOPS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct csv_table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

csv_table parse_csv(const std::string& text) {
    csv_table table;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            table.header = cells;
            first = false;
        } else {
            table.rows.push_back(cells);
        }
    }
    return table;
}

}  // namespace

TEST_CASE("pnd command writes a normalized CSV", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "pnd.csv";
    REQUIRE(run_cli("pnd --family thermal --order sa --nbar 0.25 --p 2 --q 2 --out " + out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    REQUIRE(table.header == std::vector<std::string>{"n", "probability"});
    double sum = 0.0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(table.rows[i][0] == std::to_string(i));
        sum += std::stod(table.rows[i][1]);
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
}

TEST_CASE("pnd parity zeros for the even coherent seed", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "pnd_ecs.csv";
    REQUIRE(run_cli("pnd --family ecs --alpha-re 2 --order as --p 4 --q 8 --out " + out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    for (std::size_t n = 0; n < table.rows.size(); ++n) {
        const long long m = static_cast<long long>(n) - 4 + 8;
        if (m % 2 != 0) CHECK(std::stod(table.rows[n][1]) == 0.0);
    }
}

TEST_CASE("pnd geometric column for the identity recipe", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "geo.csv";
    REQUIRE(run_cli("pnd --family thermal --order sa --nbar 0.25 --p 0 --q 0 --out " + out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    for (std::size_t n = 0; n + 1 < table.rows.size() - 5; ++n) {
        const double ratio = std::stod(table.rows[n + 1][1]) / std::stod(table.rows[n][1]);
        CHECK(std::abs(ratio - 0.2) < 1e-9);
    }
}

TEST_CASE("identical configs produce byte-identical files", "[cli]") {
    temp_dir dir;
    const auto out1 = dir.path / "a.csv";
    const auto out2 = dir.path / "b.csv";
    const std::string args = "wigner --family ecs --alpha-re 1 --order sa --p 1 --q 1 --grid-points 15 --out ";
    REQUIRE(run_cli(args + out1.string()) == 0);
    REQUIRE(run_cli(args + out2.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("wigner command schema and negativity", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "w.csv";
    REQUIRE(run_cli("wigner --family ecs --alpha-re 1 --order sa --p 1 --q 1 --grid-points 21 --out " +
                    out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    REQUIRE(table.header == std::vector<std::string>{"re", "im", "w"});
    REQUIRE(table.rows.size() == 21 * 21);
    bool negative = false;
    for (const auto& row : table.rows)
        if (std::stod(row[2]) < 0.0) negative = true;
    CHECK(negative);
}

TEST_CASE("thermal add-then-subtract wigner grid: positive with a central dip", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "wt.csv";
    REQUIRE(run_cli("wigner --family thermal --nbar 0.04 --order sa --p 1 --q 1 --grid-points 21 --out " +
                    out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    double min_w = 1.0;
    double center = 0.0;
    for (const auto& row : table.rows) {
        const double w = std::stod(row[2]);
        min_w = std::min(min_w, w);
        if (std::stod(row[0]) == 0.0 && std::stod(row[1]) == 0.0) center = w;
    }
    CHECK(min_w >= -1e-10);
    // the transformed center sits below the untransformed Gaussian peak
    CHECK(center < 2.0 / (3.14159265358979 * 1.08));
}

TEST_CASE("figure 3 sweeps stay inside (-1, 0.5)", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "fig3";
    REQUIRE(run_cli("figure 3 --out " + out.string()) == 0);
    int files = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
        if (entry.path().extension() != ".csv") continue;
        ++files;
        const auto table = parse_csv(slurp(entry.path()));
        for (const auto& row : table.rows) {
            const double q = std::stod(row[1]);
            CHECK(q > -1.0);
            CHECK(q < 0.5);
        }
    }
    CHECK(files == 4);
}

TEST_CASE("json output format", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "pnd.json";
    REQUIRE(run_cli("pnd --family thermal --order sa --nbar 0.25 --p 2 --q 2 --format json --out " +
                    out.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["family"] == "thermal");
    CHECK(j["p"] == 2);
    double sum = 0.0;
    for (const auto& v : j["probability"]) sum += v.get<double>();
    CHECK(std::abs(sum - 1.0) < 1e-10);
}

TEST_CASE("photon-added-only cat at small amplitude is negative somewhere", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "w6.csv";
    REQUIRE(run_cli("wigner --family ecs --alpha-re 0.1 --order sa --p 1 --q 0 --grid-points 21 --out " +
                    out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    double min_w = 1.0;
    for (const auto& row : table.rows) min_w = std::min(min_w, std::stod(row[2]));
    CHECK(min_w < 0.0);
}

TEST_CASE("q-sweep emits closed column when available", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "s.csv";
    REQUIRE(run_cli("q-sweep --family thermal --order sa --p 4 --q 2 --sweep-min 0.01 --sweep-max 1 "
                    "--sweep-points 25 --out " + out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    REQUIRE(table.header == std::vector<std::string>{"x", "q", "q_closed"});
    REQUIRE(table.rows.size() == 25);
    double prev = -2.0;
    for (const auto& row : table.rows) {
        const double q = std::stod(row[1]);
        CHECK(q > prev);
        prev = q;
        REQUIRE(row.size() == 3);
        CHECK(std::abs(std::stod(row[2]) - q) < 1e-7);
    }
}

TEST_CASE("q-sweep omits the closed column on singular branches", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "s2.csv";
    REQUIRE(run_cli("q-sweep --family thermal --order sa --p 1 --q 1 --sweep-min 0.05 --sweep-max 0.5 "
                    "--sweep-points 5 --out " + out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    CHECK(table.header == std::vector<std::string>{"x", "q"});
}

TEST_CASE("q-sweep nbar -> 0 limit of pure addition approaches -1", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "s3.csv";
    REQUIRE(run_cli("q-sweep --family thermal --order sa --p 3 --q 0 --sweep-min 1e-6 --sweep-max 0.2 "
                    "--sweep-points 5 --out " + out.string()) == 0);
    const auto table = parse_csv(slurp(out));
    CHECK(std::abs(std::stod(table.rows[0][1]) + 1.0) < 1e-4);
}

TEST_CASE("exit codes", "[cli]") {
    CHECK(run_cli("pnd --no-such-flag") == 2);
    CHECK(run_cli("figure 9") == 2);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("pnd --family thermal --nbar 0 --order as --p 0 --q 1") == 3);
    temp_dir dir;
    CHECK(run_cli("pnd --family thermal --nbar 0.25 --out " + (dir.path / "no/such/dir/f.csv").string()) == 2);
    CHECK(run_cli("validate --out " + (dir.path / "no/such/dir/r.json").string()) == 2);
}

TEST_CASE("figure 1 writes six normalized panels and a manifest", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "fig1";
    REQUIRE(run_cli("figure 1 --out " + out.string()) == 0);
    const std::vector<std::string> names = {"fig1_a", "fig1_b", "fig1_c", "fig1_d", "fig1_e", "fig1_f"};
    for (const auto& name : names) {
        const auto table = parse_csv(slurp(out / (name + ".csv")));
        double sum = 0.0;
        for (const auto& row : table.rows) sum += std::stod(row[1]);
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["figure"] == 1);
    REQUIRE(manifest["files"].size() == 6);
    for (const auto& name : names) {
        const auto& entry = manifest["files"][name + ".csv"];
        CHECK(entry.contains("family"));
        CHECK(entry.contains("order"));
        CHECK(entry.contains("p"));
        CHECK(entry.contains("q"));
        CHECK(entry.contains("nbar"));
        CHECK(entry.contains("cutoff"));
    }
}

TEST_CASE("figure panels are reproducible from the manifest alone", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "fig1";
    REQUIRE(run_cli("figure 1 --out " + out.string()) == 0);
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    const auto& entry = manifest["files"]["fig1_b.csv"];
    std::ostringstream cmd;
    cmd << "pnd --family " << entry["family"].get<std::string>() << " --order "
        << entry["order"].get<std::string>() << " --p " << entry["p"].get<unsigned>() << " --q "
        << entry["q"].get<unsigned>() << " --nbar " << entry["nbar"].get<double>() << " --tail-tol "
        << entry["tail_tol"].get<double>() << " --out " << (dir.path / "rebuilt.csv").string();
    REQUIRE(run_cli(cmd.str()) == 0);
    CHECK(slurp(dir.path / "rebuilt.csv") == slurp(out / "fig1_b.csv"));
}

TEST_CASE("wigner panels are reproducible from the manifest alone", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "fig6";
    REQUIRE(run_cli("figure 6 --out " + out.string()) == 0);
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    const auto& entry = manifest["files"]["fig6_a.csv"];
    std::ostringstream cmd;
    cmd << "wigner --family " << entry["family"].get<std::string>() << " --order "
        << entry["order"].get<std::string>() << " --p " << entry["p"].get<unsigned>() << " --q "
        << entry["q"].get<unsigned>() << " --alpha-re " << entry["alpha_re"].get<double>()
        << " --alpha-im " << entry["alpha_im"].get<double>() << " --grid-min "
        << entry["grid_min"].get<double>() << " --grid-max " << entry["grid_max"].get<double>()
        << " --grid-points " << entry["grid_points"].get<std::size_t>() << " --tail-tol "
        << entry["tail_tol"].get<double>() << " --out " << (dir.path / "rebuilt.csv").string();
    REQUIRE(run_cli(cmd.str()) == 0);
    CHECK(slurp(dir.path / "rebuilt.csv") == slurp(out / "fig6_a.csv"));
}

TEST_CASE("figure 5 panels agree at the origin", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "fig5";
    REQUIRE(run_cli("figure 5 --out " + out.string()) == 0);
    // the (1,1) transforms of the even cat both keep even parity, so the
    // panels coincide at beta = 0 (they differ elsewhere)
    auto center_value = [&](const std::string& name) {
        const auto table = parse_csv(slurp(out / name));
        for (const auto& row : table.rows)
            if (std::stod(row[0]) == 0.0 && std::stod(row[1]) == 0.0) return std::stod(row[2]);
        FAIL("no origin row");
        return 0.0;
    };
    CHECK(std::abs(center_value("fig5_a.csv") - center_value("fig5_d.csv")) < 1e-8);
}

TEST_CASE("validate exits zero and reports flagged discrepancies", "[cli]") {
    temp_dir dir;
    const auto out = dir.path / "report.json";
    REQUIRE(run_cli("validate --out " + out.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(out));
    CHECK(report["fail"] == 0);
    CHECK(report["flagged_paper_discrepancy"].get<int>() > 0);
    CHECK(report["singular_branch"].get<int>() > 0);
    bool sign_flag = false;
    for (const auto& rec : report["records"])
        if (rec["quantity"] == "norm-literal-sign" && rec["status"] == "flagged-paper-discrepancy")
            sign_flag = true;
    CHECK(sign_flag);

    // each parameter tuple appears exactly once per quantity
    std::vector<std::string> keys;
    for (const auto& rec : report["records"])
        keys.push_back(rec["quantity"].get<std::string>() + "|" + rec["params"].get<std::string>());
    std::sort(keys.begin(), keys.end());
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
}
