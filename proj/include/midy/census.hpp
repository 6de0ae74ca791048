#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "midy/natural.hpp"

namespace midy {

enum class CensusKind { overpseudoprime, fermat_psp, strong_psp, q_psp };

/// Wire name of the kind; q_psp carries its q ("q_psp:3").
std::string census_kind_name(CensusKind kind, const Natural& q);
std::optional<CensusKind> parse_census_kind(const std::string& name);

struct CensusOptions {
    Natural lo;  // first candidate, inclusive; only odd n are scanned
    Natural hi;  // end of range, exclusive
    Natural base = 2;
    CensusKind kind = CensusKind::overpseudoprime;
    Natural q = 0;  // required for q_psp
    unsigned jobs = 1;
    std::string out_path;
    std::string checkpoint_path;             // empty disables checkpointing
    std::uint64_t chunk_candidates = 4096;   // odd candidates per work chunk
    std::uint64_t checkpoint_interval = 1;   // chunks between checkpoint writes
    std::uint64_t stop_after_chunks = 0;     // test hook: simulate interruption
};

struct CensusResult {
    std::uint64_t records = 0;  // total lines now in the output file
    bool completed = true;      // false when stop_after_chunks fired
};

// Resumable scan cursor. cursor is the next unscanned candidate; a finished
// run leaves cursor == range_hi.
struct Checkpoint {
    Natural range_lo;
    Natural range_hi;
    Natural cursor;
    Natural base;
    std::string kind;
    std::uint64_t hits_so_far = 0;
};

std::optional<Checkpoint> load_checkpoint(const std::string& path);

/// Scans odd candidates in [lo, hi), emitting one jsonl record per hit,
/// sorted ascending by n regardless of worker scheduling. Resumes from the
/// checkpoint when one exists; resumed output is byte-identical to an
/// uninterrupted run.
CensusResult run_census(const CensusOptions& options);

}  // namespace midy
