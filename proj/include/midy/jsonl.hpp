#pragma once

#include <json.hpp>

#include <string>

#include "midy/natural.hpp"

namespace midy {

using Json = nlohmann::ordered_json;

// Output record schema, keys always in this order:
//   {"n": "<dec>", "base": "<dec>", "kind": "<str>", "flags": {...}, "extra": {...}}
// Big integers cross the boundary as decimal strings so diffs are bit-exact.
inline Json make_record(const Natural& n, const Natural& base, const std::string& kind,
                        Json flags, Json extra) {
    Json rec;
    rec["n"] = to_decimal(n);
    rec["base"] = to_decimal(base);
    rec["kind"] = kind;
    rec["flags"] = std::move(flags);
    rec["extra"] = std::move(extra);
    return rec;
}

inline std::string render_line(const Json& record) { return record.dump(); }

}  // namespace midy
