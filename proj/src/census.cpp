#include "midy/census.hpp"

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "midy/arith.hpp"
#include "midy/errors.hpp"
#include "midy/jsonl.hpp"
#include "midy/midy.hpp"
#include "midy/pseudo.hpp"

namespace midy {

namespace fs = std::filesystem;

std::string census_kind_name(CensusKind kind, const Natural& q) {
    switch (kind) {
        case CensusKind::overpseudoprime:
            return "overpseudoprime";
        case CensusKind::fermat_psp:
            return "fermat_psp";
        case CensusKind::strong_psp:
            return "strong_psp";
        case CensusKind::q_psp:
            return "q_psp:" + to_decimal(q);
    }
    return "";
}

std::optional<CensusKind> parse_census_kind(const std::string& name) {
    if (name == "overpseudoprime")
        return CensusKind::overpseudoprime;
    if (name == "fermat_psp")
        return CensusKind::fermat_psp;
    if (name == "strong_psp")
        return CensusKind::strong_psp;
    if (name == "q_psp")
        return CensusKind::q_psp;
    return std::nullopt;
}

namespace {

void scan_candidate(const CensusOptions& opt, const Natural& n, std::vector<std::string>& lines) {
    if (n < 3 || n % 2 == 0)
        return;
    if (gcd(opt.base % n, n) != 1)
        return;
    try {
        if (is_prime(n))
            return;
        bool hit = false;
        std::optional<Natural> witness;
        switch (opt.kind) {
            case CensusKind::overpseudoprime:
                hit = is_midy_number(n, opt.base);
                break;
            case CensusKind::fermat_psp:
                hit = is_fermat_psp(n, opt.base);
                break;
            case CensusKind::strong_psp:
                hit = is_strong_psp(n, opt.base);
                break;
            case CensusKind::q_psp: {
                bool eligible = (n - 1) % opt.q == 0;
                if (eligible)
                    for (const auto& fp : factorize(n))
                        if ((fp.prime - 1) % opt.q != 0) {
                            eligible = false;
                            break;
                        }
                if (!eligible)
                    return;
                const QProbableResult res = is_q_probable_prime(n, opt.base, opt.q, false);
                hit = res.result;
                witness = res.witness_i;
                break;
            }
        }
        if (!hit)
            return;
        Json flags = Json::object();
        flags["fermat_psp"] = is_fermat_psp(n, opt.base);
        flags["strong_psp"] = is_strong_psp(n, opt.base);
        flags["midy_number"] = is_midy_number(n, opt.base);
        Json extra = Json::object();
        extra["order"] = to_decimal(multiplicative_order(opt.base, n));
        if (opt.kind == CensusKind::q_psp) {
            extra["q"] = to_decimal(opt.q);
            if (witness)
                extra["witness_i"] = to_decimal(*witness);
        }
        lines.push_back(render_line(
            make_record(n, opt.base % n, census_kind_name(opt.kind, opt.q), flags, extra)));
    } catch (const FactorizationBudgetExceeded&) {
        Json extra = Json::object();
        extra["error"] = "FactorizationBudgetExceeded";
        lines.push_back(render_line(make_record(n, opt.base, "skipped", Json::object(), extra)));
    }
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
    Json j;
    j["range_lo"] = to_decimal(cp.range_lo);
    j["range_hi"] = to_decimal(cp.range_hi);
    j["cursor"] = to_decimal(cp.cursor);
    j["base"] = to_decimal(cp.base);
    j["kind"] = cp.kind;
    j["hits_so_far"] = std::to_string(cp.hits_so_far);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw IoError("census: cannot write checkpoint " + tmp);
        out << j.dump() << '\n';
        if (!out.good())
            throw IoError("census: checkpoint write failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw IoError("census: checkpoint rename failed: " + ec.message());
}

/// Keep only the first `lines` lines of the file.
void truncate_to_lines(const std::string& path, std::uint64_t lines) {
    if (!fs::exists(path)) {
        if (lines == 0)
            return;
        throw IoError("census: output file missing but checkpoint expects " +
                      std::to_string(lines) + " records");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("census: cannot read output file " + path);
    std::uint64_t seen = 0, offset = 0;
    char c;
    while (seen < lines && in.get(c)) {
        ++offset;
        if (c == '\n')
            ++seen;
    }
    if (seen < lines)
        throw IoError("census: output file has fewer records than the checkpoint");
    in.close();
    fs::resize_file(path, offset);
}

}  // namespace

std::optional<Checkpoint> load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        return std::nullopt;
    try {
        Json j = Json::parse(in);
        Checkpoint cp;
        cp.range_lo = parse_natural(j.at("range_lo").get<std::string>());
        cp.range_hi = parse_natural(j.at("range_hi").get<std::string>());
        cp.cursor = parse_natural(j.at("cursor").get<std::string>());
        cp.base = parse_natural(j.at("base").get<std::string>());
        cp.kind = j.at("kind").get<std::string>();
        cp.hits_so_far = as_u64(parse_natural(j.at("hits_so_far").get<std::string>()));
        return cp;
    } catch (const std::exception& e) {
        throw IoError(std::string("census: malformed checkpoint: ") + e.what());
    }
}

CensusResult run_census(const CensusOptions& options) {
    if (options.out_path.empty())
        throw DomainError("census: output path required");
    if (options.jobs < 1)
        throw DomainError("census: jobs must be >= 1");
    if (options.kind == CensusKind::q_psp && !is_prime(options.q))
        throw DomainError("census: q_psp needs a prime q");
    const Natural lo = options.lo;
    const Natural hi = options.hi < lo ? lo : options.hi;
    const std::string kind_name = census_kind_name(options.kind, options.q);

    Natural cursor = lo;
    std::uint64_t emitted = 0;
    bool resuming = false;
    if (!options.checkpoint_path.empty() && fs::exists(options.checkpoint_path)) {
        const auto cp = load_checkpoint(options.checkpoint_path);
        if (!cp)
            throw IoError("census: cannot read checkpoint " + options.checkpoint_path);
        if (cp->range_lo != lo || cp->range_hi != hi || cp->base != options.base ||
            cp->kind != kind_name)
            throw DomainError("census: checkpoint does not match the requested scan");
        cursor = cp->cursor;
        emitted = cp->hits_so_far;
        resuming = true;
        truncate_to_lines(options.out_path, emitted);
    }

    std::ofstream out(options.out_path,
                      resuming ? (std::ios::out | std::ios::app) : (std::ios::out | std::ios::trunc));
    if (!out)
        throw IoError("census: cannot open output file " + options.out_path);

    Natural first = cursor;
    if (first % 2 == 0)
        first += 1;
    Natural span = 0;
    if (first < hi)
        span = (hi - first + 1) / 2;
    if (!fits_u64(span))
        throw DomainError("census: range too large");
    const std::uint64_t total_candidates = as_u64(span);
    const std::uint64_t chunk = options.chunk_candidates == 0 ? 4096 : options.chunk_candidates;
    const std::uint64_t total_chunks = (total_candidates + chunk - 1) / chunk;
    const std::uint64_t chunk_limit = options.stop_after_chunks > 0
                                          ? std::min(total_chunks, options.stop_after_chunks)
                                          : total_chunks;

    std::atomic<std::uint64_t> next_idx{0};
    std::atomic<bool> abort{false};
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::uint64_t, std::vector<std::string>> ready;
    std::exception_ptr failure;

    auto worker = [&] {
        while (!abort.load(std::memory_order_relaxed)) {
            const std::uint64_t idx = next_idx.fetch_add(1);
            if (idx >= chunk_limit)
                break;
            std::vector<std::string> lines;
            try {
                const std::uint64_t begin = idx * chunk;
                const std::uint64_t end = std::min(begin + chunk, total_candidates);
                for (std::uint64_t j = begin; j < end; ++j)
                    scan_candidate(options, first + 2 * Natural(j), lines);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure)
                    failure = std::current_exception();
                abort.store(true);
                cv.notify_all();
                return;
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                ready[idx] = std::move(lines);
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(options.jobs);
    for (unsigned i = 0; i < options.jobs; ++i)
        pool.emplace_back(worker);

    bool failed = false;
    for (std::uint64_t idx = 0; idx < chunk_limit && !failed; ++idx) {
        std::vector<std::string> lines;
        {
            std::unique_lock<std::mutex> lock(mu);
            cv.wait(lock, [&] { return failure != nullptr || ready.count(idx) > 0; });
            if (failure) {
                failed = true;
                break;
            }
            lines = std::move(ready[idx]);
            ready.erase(idx);
        }
        for (const auto& line : lines) {
            out << line << '\n';
            ++emitted;
        }
        const std::uint64_t cand_end = std::min((idx + 1) * chunk, total_candidates);
        Natural next_cursor = first + 2 * Natural(cand_end);
        cursor = next_cursor < hi ? next_cursor : hi;
        const bool last = idx + 1 == chunk_limit;
        if (!options.checkpoint_path.empty() &&
            ((idx + 1) % std::max<std::uint64_t>(1, options.checkpoint_interval) == 0 || last)) {
            out.flush();
            if (!out.good())
                throw IoError("census: output write failed");
            save_checkpoint(options.checkpoint_path,
                            {lo, hi, cursor, options.base, kind_name, emitted});
        }
    }

    abort.store(true);
    cv.notify_all();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);

    const bool completed = chunk_limit == total_chunks;
    if (completed)
        cursor = hi;
    out.flush();
    if (!out.good())
        throw IoError("census: output write failed");
    if (!options.checkpoint_path.empty())
        save_checkpoint(options.checkpoint_path, {lo, hi, cursor, options.base, kind_name, emitted});
    return {emitted, completed};
}

}  // namespace midy
