#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "midy/arith.hpp"
#include "midy/census.hpp"
#include "midy/classify.hpp"
#include "midy/config.hpp"
#include "midy/cyclotomic.hpp"
#include "midy/errors.hpp"
#include "midy/jsonl.hpp"
#include "midy/midy.hpp"
#include "midy/pseudo.hpp"

namespace {

using midy::Json;
using midy::Natural;

// "a..b" is the half-open range [a, b); a bare "a" means [a, a+1).
std::pair<Natural, Natural> parse_range(const std::string& text) {
    const auto pos = text.find("..");
    if (pos == std::string::npos) {
        Natural v = midy::parse_natural(text);
        return {v, v + 1};
    }
    return {midy::parse_natural(text.substr(0, pos)), midy::parse_natural(text.substr(pos + 2))};
}

std::string format_factorization(const midy::Factorization& fact) {
    std::string out;
    for (const auto& fp : fact) {
        if (!out.empty())
            out += "*";
        out += midy::to_decimal(fp.prime);
        if (fp.exponent != 1)
            out += "^" + std::to_string(fp.exponent);
    }
    return out;
}

void emit(const Json& record) { std::cout << midy::render_line(record) << '\n'; }

int cmd_classify(const std::string& n_str, const std::string& base_str,
                 const std::vector<std::string>& q_strs, const std::string& format) {
    const Natural n = midy::parse_natural(n_str);
    const Natural base = midy::parse_natural(base_str);
    std::vector<Natural> qs;
    for (const auto& q : q_strs)
        qs.push_back(midy::parse_natural(q));
    const midy::Classification cls = midy::classify(n, base, qs);
    const Natural order = midy::multiplicative_order(base, n);

    if (format == "table") {
        std::cout << "n " << midy::to_decimal(n) << '\n'
                  << "base " << midy::to_decimal(cls.base) << '\n'
                  << "probable_prime " << (cls.probable_prime ? "true" : "false") << '\n'
                  << "fermat_psp " << (cls.fermat_psp ? "true" : "false") << '\n'
                  << "strong_psp " << (cls.strong_psp ? "true" : "false") << '\n'
                  << "midy_number " << (cls.midy_number ? "true" : "false") << '\n'
                  << "carmichael " << (cls.carmichael ? "true" : "false") << '\n'
                  << "order " << midy::to_decimal(order) << '\n';
        for (const auto& r : cls.q_results) {
            std::cout << "q_" << midy::to_decimal(r.q) << ' '
                      << (r.probable_prime ? "true" : "false");
            if (r.witness_i)
                std::cout << " witness_i=" << midy::to_decimal(*r.witness_i);
            std::cout << '\n';
        }
        return 0;
    }
    Json flags = Json::object();
    flags["probable_prime"] = cls.probable_prime;
    flags["fermat_psp"] = cls.fermat_psp;
    flags["strong_psp"] = cls.strong_psp;
    flags["midy_number"] = cls.midy_number;
    flags["carmichael"] = cls.carmichael;
    Json extra = Json::object();
    extra["order"] = midy::to_decimal(order);
    if (cls.factorization)
        extra["factorization"] = format_factorization(*cls.factorization);
    for (const auto& r : cls.q_results) {
        const std::string key = "q_" + midy::to_decimal(r.q);
        extra[key] = r.probable_prime ? "true" : "false";
        if (r.witness_i)
            extra[key + "_witness_i"] = midy::to_decimal(*r.witness_i);
    }
    emit(midy::make_record(n, cls.base, "classification", flags, extra));
    return 0;
}

int cmd_midy_set(const std::string& n_str, const std::string& base_str, const std::string& format) {
    const midy::MidySet set =
        midy::midy_set(midy::parse_natural(n_str), midy::parse_natural(base_str));
    std::string members;
    for (const auto& d : set.members) {
        if (!members.empty())
            members += " ";
        members += midy::to_decimal(d);
    }
    if (format == "table") {
        std::cout << members << '\n';
        return 0;
    }
    Json extra = Json::object();
    extra["order"] = midy::to_decimal(set.order);
    extra["members"] = members;
    emit(midy::make_record(set.modulus, set.base, "midy_set", Json::object(), extra));
    return 0;
}

int cmd_count_bases(const std::string& n_str, const std::string& kind, const std::string& q_str,
                    bool verify, const std::string& format) {
    const Natural n = midy::parse_natural(n_str);
    Natural formula;
    std::vector<std::pair<std::string, Natural>> brute;  // label -> count
    if (kind == "pp") {
        formula = midy::count_pp_bases(n);
        if (verify)
            brute.emplace_back("brute", midy::count_bases_brute(n, midy::BasePredicate::fermat()));
    } else if (kind == "spp") {
        formula = midy::count_spp_bases(n);
        if (verify)
            brute.emplace_back("brute", midy::count_bases_brute(n, midy::BasePredicate::strong()));
    } else if (kind == "qpp") {
        if (q_str.empty())
            throw midy::DomainError("count-bases: --kind qpp requires --q");
        const Natural q = midy::parse_natural(q_str);
        formula = midy::count_qpp_bases(n, q);
        if (verify)
            brute.emplace_back("brute",
                               midy::count_bases_brute(n, midy::BasePredicate::q_probable(q)));
    } else if (kind == "midy") {
        formula = midy::count_midy_bases(n);
        if (verify) {
            const midy::MidyBruteCounts counts = midy::count_midy_bases_brute(n);
            brute.emplace_back("brute_order_equality", counts.by_order_equality);
            brute.emplace_back("brute_full_definition", counts.by_full_definition);
        }
    } else {
        throw midy::DomainError("count-bases: unknown kind " + kind);
    }

    bool match = true;
    for (const auto& [label, value] : brute)
        match = match && value == formula;

    if (format == "table") {
        std::cout << "formula " << midy::to_decimal(formula) << '\n';
        for (const auto& [label, value] : brute)
            std::cout << label << ' ' << midy::to_decimal(value) << '\n';
        if (verify)
            std::cout << (match ? "MATCH" : "MISMATCH") << '\n';
    } else {
        Json extra = Json::object();
        extra["formula"] = midy::to_decimal(formula);
        for (const auto& [label, value] : brute)
            extra[label] = midy::to_decimal(value);
        if (verify)
            extra["verdict"] = match ? "MATCH" : "MISMATCH";
        emit(midy::make_record(n, Natural(0), "count_" + kind, Json::object(), extra));
    }
    return verify && !match ? 4 : 0;
}

int cmd_generate(const std::string& n_range, const std::string& base_range,
                 const std::string& format) {
    const auto [n_lo, n_hi] = parse_range(n_range);
    const auto [b_lo, b_hi] = parse_range(base_range);
    if (n_lo <= 2)
        throw midy::DomainError("generate: n must exceed 2");
    if (b_lo < 2)
        throw midy::DomainError("generate: base must be >= 2");
    for (Natural n = n_lo; n < n_hi; ++n) {
        for (Natural b = b_lo; b < b_hi; ++b) {
            Json extra = Json::object();
            std::string verdict;
            try {
                const midy::GeneratorOutcome out = midy::midy_generator(n, b);
                switch (out.verdict) {
                    case midy::GeneratorOutcome::Verdict::Prime:
                        verdict = "prime";
                        break;
                    case midy::GeneratorOutcome::Verdict::MidyNumber:
                        verdict = "midy_number";
                        break;
                    case midy::GeneratorOutcome::Verdict::Unit:
                        verdict = "unit";
                        break;
                }
                extra["value"] = midy::to_decimal(out.value);
                extra["verdict"] = verdict;
            } catch (const midy::BudgetError& e) {
                extra["error"] = e.what();
                verdict = "error";
            }
            if (format == "table") {
                std::cout << "n=" << midy::to_decimal(n) << " b=" << midy::to_decimal(b);
                if (extra.contains("value"))
                    std::cout << " value=" << extra["value"].get<std::string>()
                              << " verdict=" << verdict;
                else
                    std::cout << " error=" << extra["error"].get<std::string>();
                std::cout << '\n';
            } else {
                emit(midy::make_record(n, b, "generator", Json::object(), extra));
            }
        }
    }
    return 0;
}

int cmd_census(const std::string& range, const std::string& base_str, const std::string& kind_str,
               const std::string& q_str, unsigned jobs, const std::string& out_path,
               const std::string& checkpoint_path, std::uint64_t chunk,
               std::uint64_t checkpoint_interval) {
    midy::CensusOptions opt;
    std::tie(opt.lo, opt.hi) = parse_range(range);
    opt.base = midy::parse_natural(base_str);
    const auto kind = midy::parse_census_kind(kind_str);
    if (!kind)
        throw midy::DomainError("census: unknown kind " + kind_str);
    opt.kind = *kind;
    if (opt.kind == midy::CensusKind::q_psp) {
        if (q_str.empty())
            throw midy::DomainError("census: --kind q_psp requires --q");
        opt.q = midy::parse_natural(q_str);
    }
    opt.jobs = jobs == 0 ? 1 : jobs;
    opt.out_path = out_path;
    opt.checkpoint_path = checkpoint_path;
    opt.chunk_candidates = chunk;
    opt.checkpoint_interval = checkpoint_interval;
    const midy::CensusResult result = midy::run_census(opt);
    std::cout << "records " << result.records << '\n'
              << "completed " << (result.completed ? "true" : "false") << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Midy numbers, pseudoprime classification and base counting"};
    app.require_subcommand(1);

    std::string format = "jsonl";
    std::uint64_t oracle_bound = midy::config::kDefaultOracleBound;
    std::uint64_t factor_budget = midy::config::kDefaultFactorBudget;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"jsonl", "table"}));
    app.add_option("--oracle-bound", oracle_bound, "Largest N the exhaustive oracles enumerate")
        ->envname("MIDY_ORACLE_BOUND");
    app.add_option("--factor-budget", factor_budget, "Rho iterations allowed per factorization")
        ->envname("MIDY_FACTOR_BUDGET");

    std::string n_str, base_str = "2", kind, q_single, range_str, base_range = "2";
    std::vector<std::string> q_list;
    bool verify = false;
    std::string out_path, checkpoint_path;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t chunk = 4096, checkpoint_interval = 1;

    CLI::App* classify = app.add_subcommand("classify", "All pseudoprimality flags for one (n, base)");
    classify->add_option("n", n_str, "Odd n >= 3 (decimal)")->required();
    classify->add_option("--base", base_str, "Base b, coprime to n")->required();
    classify->add_option("--q", q_list, "Restrict q-probable-prime checks to these primes");
    classify->fallthrough();

    CLI::App* midy_set_cmd = app.add_subcommand("midy-set", "Members of the Midy set M_b(N)");
    midy_set_cmd->add_option("n", n_str)->required();
    midy_set_cmd->add_option("--base", base_str)->required();
    midy_set_cmd->fallthrough();

    CLI::App* count = app.add_subcommand("count-bases", "Base-counting formulas, optionally brute-verified");
    count->add_option("n", n_str)->required();
    count->add_option("--kind", kind, "pp | spp | qpp | midy")->required();
    count->add_option("--q", q_single, "q for --kind qpp");
    count->add_flag("--verify", verify, "Also run the exhaustive count and compare");
    count->fallthrough();

    CLI::App* generate = app.add_subcommand("generate", "Stream f_n(b) generator outcomes over ranges");
    generate->add_option("--range", range_str, "n range a..b (half-open)")->required();
    generate->add_option("--base", base_range, "base range a..b (half-open) or single value");
    generate->fallthrough();

    CLI::App* census = app.add_subcommand("census", "Parallel checkpointed scan of a range");
    census->add_option("--range", range_str, "Scan range a..b (half-open, odd n only)")->required();
    census->add_option("--base", base_str, "Base b");
    census->add_option("--kind", kind, "overpseudoprime | fermat_psp | strong_psp | q_psp")
        ->required();
    census->add_option("--q", q_single, "q for --kind q_psp");
    census->add_option("--jobs", jobs, "Worker threads")->envname("MIDY_JOBS");
    census->add_option("--out", out_path, "Output file (jsonl)")->required();
    census->add_option("--checkpoint", checkpoint_path, "Checkpoint file for resume");
    census->add_option("--chunk-size", chunk, "Odd candidates per work chunk");
    census->add_option("--checkpoint-interval", checkpoint_interval, "Chunks between checkpoints");
    census->fallthrough();

    CLI11_PARSE(app, argc, argv);

    midy::config::set_oracle_bound(oracle_bound);
    midy::config::set_factor_budget(factor_budget);

    try {
        if (classify->parsed())
            return cmd_classify(n_str, base_str, q_list, format);
        if (midy_set_cmd->parsed())
            return cmd_midy_set(n_str, base_str, format);
        if (count->parsed())
            return cmd_count_bases(n_str, kind, q_single, verify, format);
        if (generate->parsed())
            return cmd_generate(range_str, base_range, format);
        if (census->parsed())
            return cmd_census(range_str, base_str, kind, q_single, jobs, out_path, checkpoint_path,
                              chunk, checkpoint_interval);
    } catch (const midy::BudgetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const midy::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    } catch (const midy::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const midy::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
