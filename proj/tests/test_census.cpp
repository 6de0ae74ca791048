#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "midy/arith.hpp"
#include "midy/census.hpp"
#include "midy/jsonl.hpp"
#include "midy/config.hpp"
#include "midy/errors.hpp"
#include "midy/pseudo.hpp"

using midy::Natural;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("midy_test_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint64_t> hit_values(const std::string& path) {
    std::vector<std::uint64_t> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        out.push_back(std::stoull(j.at("n").get<std::string>()));
    }
    return out;
}

midy::CensusOptions base_options(const TempDir& dir, const std::string& name) {
    midy::CensusOptions opt;
    opt.lo = 3;
    opt.hi = 20000;
    opt.base = 2;
    opt.kind = midy::CensusKind::overpseudoprime;
    opt.out_path = dir.file(name);
    return opt;
}

}  // namespace

TEST_CASE("census finds the base-2 overpseudoprimes below 20000") {
    TempDir dir;
    auto opt = base_options(dir, "scan.jsonl");
    auto result = midy::run_census(opt);
    CHECK(result.completed);
    CHECK(result.records == 4);
    CHECK(hit_values(opt.out_path) == std::vector<std::uint64_t>{2047, 3277, 4033, 8321});

    // Records carry the full flag chain and the order.
    std::ifstream in(opt.out_path);
    std::string line;
    REQUIRE(std::getline(in, line));
    auto j = nlohmann::json::parse(line);
    CHECK(j.at("n") == "2047");
    CHECK(j.at("base") == "2");
    CHECK(j.at("kind") == "overpseudoprime");
    CHECK(j.at("flags").at("fermat_psp") == true);
    CHECK(j.at("flags").at("strong_psp") == true);
    CHECK(j.at("flags").at("midy_number") == true);
    CHECK(j.at("extra").at("order") == "11");
    // Fixed key order for byte-exact diffs.
    CHECK(line.rfind("{\"n\":\"2047\",\"base\":\"2\",\"kind\":\"overpseudoprime\",\"flags\":", 0) == 0);
}

TEST_CASE("census output is byte-identical across jobs counts") {
    TempDir dir;
    std::string reference;
    for (unsigned jobs : {1u, 4u, 8u}) {
        auto opt = base_options(dir, "jobs" + std::to_string(jobs) + ".jsonl");
        opt.kind = midy::CensusKind::fermat_psp;
        opt.jobs = jobs;
        opt.chunk_candidates = 512;
        midy::run_census(opt);
        const std::string content = slurp(opt.out_path);
        if (reference.empty())
            reference = content;
        CHECK(content == reference);
    }
    CHECK_FALSE(reference.empty());
}

TEST_CASE("census against a direct scan (fermat kind)") {
    TempDir dir;
    auto opt = base_options(dir, "fermat.jsonl");
    opt.hi = 3000;
    opt.kind = midy::CensusKind::fermat_psp;
    midy::run_census(opt);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 3; n < 3000; n += 2) {
        if (n % 2 == 0 || midy::is_prime(Natural(n)) || std::gcd<std::uint64_t>(n, 2) != 1)
            continue;
        if (midy::powmod_u64(2, n - 1, n) == 1)
            expected.push_back(n);
    }
    CHECK(hit_values(opt.out_path) == expected);
    CHECK(expected.front() == 341);
}

TEST_CASE("census q_psp kind scans only eligible n") {
    TempDir dir;
    auto opt = base_options(dir, "qpsp.jsonl");
    opt.hi = 5000;
    opt.kind = midy::CensusKind::q_psp;
    opt.q = 3;
    opt.base = 5;
    midy::run_census(opt);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 3; n < 5000; n += 2) {
        if (std::gcd<std::uint64_t>(n, 5) != 1 || midy::is_prime(Natural(n)))
            continue;
        bool eligible = (n - 1) % 3 == 0;
        if (eligible)
            for (const auto& fp : midy::factorize(Natural(n)))
                eligible = eligible && (fp.prime - 1) % 3 == 0;
        if (eligible && midy::is_q_probable_prime(Natural(n), Natural(5), Natural(3), true).result)
            expected.push_back(n);
    }
    CHECK(hit_values(opt.out_path) == expected);
}

TEST_CASE("interrupted census resumes to a byte-identical file") {
    TempDir dir;

    auto uninterrupted = base_options(dir, "full.jsonl");
    uninterrupted.chunk_candidates = 512;
    midy::run_census(uninterrupted);
    const std::string expected = slurp(uninterrupted.out_path);

    auto interrupted = base_options(dir, "resumed.jsonl");
    interrupted.chunk_candidates = 512;
    interrupted.checkpoint_path = dir.file("resume.ckpt");
    interrupted.stop_after_chunks = 3;
    auto partial = midy::run_census(interrupted);
    CHECK_FALSE(partial.completed);

    const auto cp = midy::load_checkpoint(interrupted.checkpoint_path);
    REQUIRE(cp.has_value());
    CHECK(cp->range_lo == 3);
    CHECK(cp->range_hi == 20000);
    CHECK(cp->cursor == 3 + 2 * (512 * 3));
    CHECK(cp->kind == "overpseudoprime");

    interrupted.stop_after_chunks = 0;
    auto resumed = midy::run_census(interrupted);
    CHECK(resumed.completed);
    CHECK(slurp(interrupted.out_path) == expected);

    const auto final_cp = midy::load_checkpoint(interrupted.checkpoint_path);
    REQUIRE(final_cp.has_value());
    CHECK(final_cp->cursor == 20000);
    CHECK(final_cp->hits_so_far == 4);
}

TEST_CASE("resume drops records past the checkpoint") {
    TempDir dir;
    auto opt = base_options(dir, "trunc.jsonl");
    opt.chunk_candidates = 512;
    opt.checkpoint_path = dir.file("trunc.ckpt");
    opt.stop_after_chunks = 2;
    midy::run_census(opt);

    // Simulate a crash after extra unchecked output was flushed.
    {
        std::ofstream out(opt.out_path, std::ios::app);
        out << "{\"n\":\"9999999\",\"garbage\":true}\n";
        out << "{\"n\":\"trailing";  // even a torn line
    }
    opt.stop_after_chunks = 0;
    midy::run_census(opt);

    auto fresh = base_options(dir, "fresh.jsonl");
    midy::run_census(fresh);
    CHECK(slurp(opt.out_path) == slurp(fresh.out_path));
}

TEST_CASE("checkpoint mismatch and corrupt output are rejected") {
    TempDir dir;
    auto opt = base_options(dir, "reject.jsonl");
    opt.chunk_candidates = 512;
    opt.checkpoint_path = dir.file("reject.ckpt");
    opt.stop_after_chunks = 1;
    midy::run_census(opt);

    auto altered = opt;
    altered.stop_after_chunks = 0;
    altered.base = 3;
    CHECK_THROWS_AS(midy::run_census(altered), midy::DomainError);

    // Output file shorter than the checkpoint promises.
    std::ofstream(opt.out_path, std::ios::trunc).close();
    const auto cp = midy::load_checkpoint(opt.checkpoint_path);
    REQUIRE(cp.has_value());
    if (cp->hits_so_far > 0) {
        opt.stop_after_chunks = 0;
        CHECK_THROWS_AS(midy::run_census(opt), midy::IoError);
    }
}

TEST_CASE("empty range produces an empty file") {
    TempDir dir;
    auto opt = base_options(dir, "empty.jsonl");
    opt.lo = 50;
    opt.hi = 50;
    opt.checkpoint_path = dir.file("empty.ckpt");
    auto result = midy::run_census(opt);
    CHECK(result.completed);
    CHECK(result.records == 0);
    CHECK(slurp(opt.out_path).empty());
}

TEST_CASE("records round-trip through the output schema") {
    TempDir dir;
    auto opt = base_options(dir, "roundtrip.jsonl");
    opt.hi = 5000;
    opt.kind = midy::CensusKind::fermat_psp;
    midy::run_census(opt);
    std::ifstream in(opt.out_path);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        auto j = midy::Json::parse(line);
        CHECK(j.dump() == line);
        // Rebuilding from parsed fields reproduces the exact bytes.
        auto rebuilt = midy::make_record(midy::parse_natural(j.at("n").get<std::string>()),
                                         midy::parse_natural(j.at("base").get<std::string>()),
                                         j.at("kind").get<std::string>(), j.at("flags"),
                                         j.at("extra"));
        CHECK(midy::render_line(rebuilt) == line);
    }
    CHECK(lines > 0);
}

TEST_CASE("factorization budget failures become skip records") {
    TempDir dir;
    auto opt = base_options(dir, "budget.jsonl");
    // 1000003^2 is odd, composite, and out of trial-division reach.
    opt.lo = Natural("1000006000009");
    opt.hi = Natural("1000006000010");
    midy::config::set_factor_budget(1);
    auto result = midy::run_census(opt);
    midy::config::set_factor_budget(midy::config::kDefaultFactorBudget);
    CHECK(result.records == 1);
    std::ifstream in(opt.out_path);
    std::string line;
    REQUIRE(std::getline(in, line));
    auto j = nlohmann::json::parse(line);
    CHECK(j.at("kind") == "skipped");
    CHECK(j.at("extra").at("error") == "FactorizationBudgetExceeded");
}
